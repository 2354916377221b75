#include "teps/registry.hpp"

#include "teps/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace teps {

namespace {

constexpr double kPi = std::numbers::pi;

Check make_check(std::string id, double value, double reference, double tol, std::string note = {}) {
  Check c{std::move(id), value, reference, tol, false, std::move(note)};
  c.pass = std::isfinite(value) && std::abs(value - reference) <= tol;
  return c;
}

// Pass/fail decided by the caller; value and reference are still reported.
Check rule_check(std::string id, double value, double reference, double tol, bool pass, std::string note) {
  return Check{std::move(id), value, reference, tol, pass, std::move(note)};
}

bool all_pass(const std::vector<Check>& cs) {
  return !cs.empty() && std::all_of(cs.begin(), cs.end(), [](const Check& c) { return c.pass; });
}

RunConfig config_from(const std::string& text, const std::string& name) { return resolve(parse_ini(text, name)); }

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Printed reference value: the tolerance is one unit in its last printed digit.
struct PrintedRow {
  std::string table;
  std::string system;  // "g12", "g24", "lj"
  double k;
  std::string printed;
  bool absolute;  // table lists |delta|
};

double last_digit_unit(const std::string& printed) {
  const auto dot = printed.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
  return std::pow(10.0, -decimals);
}

// Lennard-Jones rows use the calibrated hbar^2/2mu (meV A^2).
constexpr double kLjKineticCoeff = 2.117;

double oracle_for(const std::string& system, double k) {
  UnitSystem u;
  PotentialSpec pot;
  if (system == "g12") {
    pot = Gaussian{1.0, 2.0};
  } else if (system == "g24") {
    pot = Gaussian{2.0, 4.0};
  } else {
    u.length_unit = "A";
    u.energy_unit = "meV";
    u.kinetic_coeff = kLjKineticCoeff;
    pot = LennardJones{};
  }
  return oracle_phase_shift(pot, u, k, 0);
}

CriterionReport oracle_fidelity() {
  CriterionReport r{1, "Numerov oracle vs printed exact phase shifts", {}, {}, false};
  const std::vector<PrintedRow> rows = {
      {"T1", "g12", 1.466, "0.646", true},   {"T1", "g12", 1.73, "0.540", true},
      {"T1", "g12", 2.252, "0.4599", true},  {"T1", "lj", 0.602, "0.753", true},
      {"T1", "lj", 0.8639, "0.543", true},   {"T1", "lj", 0.995, "1.148", true},
      {"T3", "g12", 1.72, "-0.54", false},   {"T3", "g12", 2.12, "-0.43", false},
      {"T3", "g12", 2.67, "-0.33", false},   {"T3", "g24", 1.334, "-0.16", false},
      {"T3", "g24", 1.86, "0.98", false},    {"T3", "g24", 2.51, "-1.49", false},
      {"T3", "lj", 0.67, "0.42", false},     {"T3", "lj", 1.19, "1.13", false},
      {"T3", "lj", 1.58, "-0.49", false},    {"T5", "g12", 0.351, "-0.50", false},
      {"T5", "g12", 0.351, "-0.499", false}, {"T5", "g12", 0.545, "-0.704", false},
      {"T5", "g24", 0.415, "1.00", false},   {"T5", "g24", 0.662, "0.11", false},
      {"T5", "g24", 1.014, "-0.47", false},  {"T5", "lj", 0.408, "-1.33", false},
      {"T5", "lj", 0.537, "1.10", false},    {"T5", "lj", 1.06, "-1.44", false},
      {"T7", "g24", 1.9107, "0.964", true},
  };
  for (const auto& row : rows) {
    double d = oracle_for(row.system, row.k);
    if (row.absolute) d = std::abs(d);
    const double ref = std::stod(row.printed);
    const double tol = last_digit_unit(row.printed) * (1.0 + 1e-9);
    r.checks.push_back(make_check(row.table + " " + row.system + " k=" + fixed(row.k, 4), d, ref, tol,
                                  row.absolute ? "compares |delta|" : "signed"));
  }
  r.verdict = all_pass(r.checks);
  return r;
}

const char* kGaussian12 = R"(
[potential]
type = gaussian
V0 = 1
sigma = 2
)";

const char* kGaussian24 = R"(
[potential]
type = gaussian
V0 = 2
sigma = 4
)";

CriterionReport teps_lattice() {
  CriterionReport r{2, "TEPS on the lattice, Gaussian{1,2}, desk scale R_p=3000 a=0.04", {}, {}, false};
  for (double k : {1.466, 1.73}) {
    const auto cfg = config_from(std::string(kGaussian12) + "[basis]\na = 0.04\npoints = 3000\n[initial]\nk = " +
                                     fixed(k, 4) + "\nr0 = 26\ngamma = 2\n[time]\nstart = 0\nstop = 60\nstep = 0.5\n",
                                 "criterion2");
    const auto o = run_teps(cfg);
    const double v = o.value ? o.value->mean : std::nan("");
    std::string note = o.series.plateau ? "plateau [" + fixed(o.series.plateau->t_a, 1) + ", " +
                                              fixed(o.series.plateau->t_b, 1) + "]"
                                        : "no plateau";
    r.checks.push_back(make_check("k=" + fixed(k, 3) + " |delta| vs Numerov", v, std::abs(o.exact), 0.03, note));
  }
  r.verdict = all_pass(r.checks);
  return r;
}

CriterionReport vteps_lattice() {
  CriterionReport r{3, "V-TEPS on the lattice (R_p=6000, a=0.02), signed phase", {}, {}, false};
  struct Row {
    const char* pot;
    const char* name;
    double k;
  };
  const std::vector<Row> rows = {{kGaussian12, "g12", 1.72}, {kGaussian12, "g12", 2.12}, {kGaussian12, "g12", 2.67},
                                 {kGaussian24, "g24", 1.86}, {kGaussian24, "g24", 2.51}};
  for (const auto& row : rows) {
    const auto cfg = config_from(std::string(row.pot) + "[basis]\na = 0.02\npoints = 6000\n[initial]\nk = " +
                                     fixed(row.k, 4) +
                                     "\n[time]\nstart = 10\nstop = 40\nstep = 1\nplateau_window = 5\n[scan]\npoints = 100\n",
                                 "criterion3");
    const auto o = run_vteps(cfg);
    const double v = o.value ? o.value->mean : std::nan("");
    const std::string id = std::string(row.name) + " k=" + fixed(row.k, 2);
    std::string note = o.plateau ? "plateau [" + fixed(o.plateau->t_a, 0) + ", " + fixed(o.plateau->t_b, 0) + "]"
                                 : "no plateau";
    r.checks.push_back(make_check(id + " delta vs Numerov", v, o.exact, 0.03, note));
    r.checks.push_back(rule_check(id + " sign", v, o.exact, 0.0, std::isfinite(v) && (v > 0) == (o.exact > 0),
                                  "sign of delta must match"));
  }
  r.verdict = all_pass(r.checks);
  return r;
}

// Shared Bessel set-up for the basis-expansion criteria.
std::string bessel_config(int nk, double k0, int n_i, int n_f) {
  return std::string(kGaussian12) + "[basis]\ntype = bessel\nnk = " + std::to_string(nk) + "\nk0 = " + fixed(k0, 4) +
         "\ndk = 0.0084\nr_max = 750\n[initial]\nk = 0.351\nfilter = fermi\nr0 = 110\ngamma = 20\n[detector]\nn_i = " +
         std::to_string(n_i) + "\nn_f = " + std::to_string(n_f) + "\n";
}

CriterionReport vteps_bessel() {
  CriterionReport r{4, "V-TEPS in the spherical Bessel basis, Gaussian{1,2}, k_in=0.351", {}, {}, false};
  struct Row {
    int nk;
    double k0;
    double ref;
    double tol;
  };
  for (const Row& row : {Row{8, 0.315, -0.48, 0.04}, Row{32, 0.224, -0.49, 0.03}}) {
    const auto cfg = config_from(bessel_config(row.nk, row.k0, 2, 6) +
                                     "[time]\nstart = 300\nstop = 900\nstep = 10\nplateau_window = 9\n[scan]\npoints = 100\n",
                                 "criterion4");
    const auto o = run_vteps(cfg);
    const double v = o.value ? o.value->mean : std::nan("");
    std::string note = "exact " + fixed(o.exact, 4) + ", k_in " + fixed(o.k_in, 5) + ", " +
                       (o.plateau ? "plateau [" + fixed(o.plateau->t_a, 0) + ", " + fixed(o.plateau->t_b, 0) + "]"
                                  : std::string("no plateau"));
    r.checks.push_back(make_check("N_k=" + std::to_string(row.nk) + " k0=" + fixed(row.k0, 3), v, row.ref, row.tol, note));
  }
  r.verdict = all_pass(r.checks);
  return r;
}

CriterionReport shot_fit() {
  CriterionReport r{5, "Shot-sampled cos^2 fit at t=20, 1000 shots, 10 seeds", {}, {}, false};
  const auto cfg = config_from(std::string(kGaussian12) + "[basis]\na = 0.02\npoints = 6000\n[initial]\nk = 2.67\n", "criterion5");
  const PreparedRun p = prepare_run(cfg);
  const WaveState psi = evolve(p.initial, p.H, 20.0, cfg.propagator);
  const auto grid = delta_grid(20);
  const auto dets = detector_family(p.basis, p.k_in, cfg.L, p.n_i, p.n_f, grid, cfg.detector.guard);
  constexpr double kRef = -0.330;
  int passed = 0;
  std::vector<double> sigmas;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto scan = scan_probabilities(psi, dets, grid, 1000L, seed);
    const auto fit = fit_cos2(scan, false);
    const double v = fit.maximizer.value_or(std::nan(""));
    const double tol = 3.0 * fit.sigma_B;
    auto c = make_check("seed " + std::to_string(seed), v, kRef, tol, "within 3 sigma_fit");
    passed += c.pass;
    sigmas.push_back(fit.sigma_B);
    r.checks.push_back(std::move(c));
  }
  std::sort(sigmas.begin(), sigmas.end());
  const double med = 0.5 * (sigmas[4] + sigmas[5]);
  const bool sigma_ok = med >= 0.008 && med <= 0.02;
  r.checks.push_back(rule_check("median sigma_fit", med, 0.014, 0.006, sigma_ok, "must lie in [0.008, 0.02]"));
  r.detail = std::to_string(passed) + "/10 seeds within 3 sigma (need >= 8); median sigma_fit in range";
  r.verdict = passed >= 8 && sigma_ok;
  return r;
}

const std::string kEmulatorTime = "[time]\nstart = 0\nstop = 1000\nstep = 10\nplateau_window = 9\nvar_tol = 1e-5\n";

CriterionReport emulator_equivalence() {
  CriterionReport r{6, "4-qubit emulation vs classical Bessel pipeline", {}, {}, false};
  const auto cfg = config_from(bessel_config(8, 0.315, 2, 6) + kEmulatorTime + "[scan]\npoints = 40\n", "criterion6");
  const auto o = run_emulate(cfg);
  r.checks.push_back(rule_check("qubits", o.qubits, 4, 0, o.qubits == 4, "N_k=8 gives 16 states"));
  r.checks.push_back(rule_check("max |P_emu - P_classical|", o.max_abs_diff, 0.0, 1e-10, o.max_abs_diff <= 1e-10,
                                "time scan and delta_V scan"));
  r.checks.push_back(rule_check("plateau start", o.plateau ? o.plateau->t_a : std::nan(""), 450.0, 0.0,
                                o.plateau && o.plateau->t_a >= 450.0, "detected plateau must start at or after 450"));
  r.checks.push_back(rule_check("plateau end", o.plateau ? o.plateau->t_b : std::nan(""), 750.0, 0.0,
                                o.plateau && o.plateau->t_b <= 750.0, "detected plateau must end at or before 750"));
  r.verdict = all_pass(r.checks);
  return r;
}

CriterionReport noise_mitigation() {
  CriterionReport r{7, "Depolarizing noise and decoherence renormalization", {}, {}, false};
  // (a) DR undoes the global channel for arbitrary draws.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(U(rng) * 6.0);
    const qemu::NoiseModel noise{0.05 + 0.95 * U(rng)};
    const double p = U(rng);
    const double p_noisy = qemu::depolarize(p, noise, n);
    const double id_noisy = qemu::depolarize(1.0, noise, n);
    const auto dr = qemu::decoherence_renormalize({p_noisy, id_noisy, 1.0, n});
    worst = std::max(worst, std::abs(dr.P - p));
  }
  r.checks.push_back(make_check("(a) max |DR(noisy) - ideal| over 1000 draws", worst, 0.0, 1e-12));

  // (b) The hardware f1 midline C + A/2 is 0.094. A global depolarizing channel only moves the midline
  // from its noiseless value toward 1/2^n, so the target is reachable only when the noiseless midline
  // exceeds it. Otherwise lambda falls back to the raw/mitigated amplitude ratio of the hardware fits.
  constexpr double kMidline = 0.094;
  constexpr double kContrastRatio = 0.118 / 0.247;
  const auto base = bessel_config(8, 0.315, 2, 6) + kEmulatorTime;
  const auto ideal = run_emulate(config_from(base + "[scan]\npoints = 20\n", "criterion7"));
  const FitResult f1_ideal = fit_cos2(ideal.scan_ideal, true);
  const double mid_ideal = f1_ideal.C.value_or(0.0) + 0.5 * f1_ideal.A;
  const double floor = 1.0 / 16.0;
  double lambda = (kMidline - floor) / (mid_ideal - floor);
  std::string tuning = "lambda from midline 0.094";
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    lambda = kContrastRatio;
    tuning = "midline 0.094 unreachable (noiseless midline " + fixed(mid_ideal, 4) +
             "); lambda from hardware contrast ratio";
  }
  const double ref = f1_ideal.maximizer.value_or(std::nan(""));
  const std::string noisy_cfg = base + "[noise]\nlambda = " + fixed(lambda, 12) + "\n";
  // Exact probabilities: the channel is affine, so the maximizer must not move at all.
  const auto exact_noisy = run_emulate(config_from(noisy_cfg + "[scan]\npoints = 20\n", "criterion7"));
  const double mid_noisy = exact_noisy.fit_noisy->C.value_or(0.0) + 0.5 * exact_noisy.fit_noisy->A;
  const double mid_expected = lambda * mid_ideal + (1.0 - lambda) * floor;
  r.checks.push_back(make_check("(b) noisy midline C + A/2 vs channel prediction", mid_noisy, mid_expected, 1e-9,
                                tuning + ", lambda = " + fixed(lambda, 4)));
  r.checks.push_back(make_check("(b) f1 maximizer, exact probabilities", exact_noisy.fit_noisy->maximizer.value_or(std::nan("")),
                                ref, 1e-8, "argmax invariance"));
  int within = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    const auto o = run_emulate(config_from(noisy_cfg + "[scan]\npoints = 20\nshots = 1000\nseed = " + std::to_string(seed) + "\n",
                                           "criterion7"));
    const double v = o.fit_noisy->maximizer.value_or(std::nan(""));
    auto c = make_check("(b) f1 maximizer, 1000 shots, seed " + std::to_string(seed), v, ref, o.fit_noisy->sigma_B,
                        "within 1 sigma_fit of noiseless");
    within += c.pass;
    r.checks.push_back(std::move(c));
  }
  r.detail = "(a) and exact-probability checks must pass; shot-sampled: " + std::to_string(within) +
             "/10 within 1 sigma (need >= 6, 1 sigma covers ~68%)";
  bool fixed_ok = true;
  for (std::size_t i = 0; i < 3; ++i) fixed_ok = fixed_ok && r.checks[i].pass;
  r.verdict = fixed_ok && within >= 6;
  return r;
}

CriterionReport multi_front() {
  CriterionReport r{8, "Multi-front robustness of the V-TEPS argmax", {}, {}, false};
  // Hard detector edges carry sin(2 delta_V) and snap to nodes, which jitters P by ~a/(window length).
  // A fine grid keeps that well below the cos^2 curvature across one scan step.
  LatticeBasis lb;
  lb.a = 0.005;
  lb.points = 12000;
  const Basis basis = lb;
  const double k = 1.72;
  // Fronts occupy whole periods strictly inside the detector window, so every shifted detector
  // covers them completely.
  const int n_i = 1, n_f = 10;
  const auto grid = delta_grid(100);
  const auto dets = detector_family(basis, k, 0, n_i, n_f, grid);
  const double step = kPi / 100.0;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> phase(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> amp(0.05, 2.0);
  std::bernoulli_distribution empty(0.3);
  const Eigen::VectorXd r_nodes = lb.nodes();
  double worst = 0.0;
  int failures = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const double dL = phase(rng);
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(lb.points);
    bool any = false;
    for (int n = n_i + 1; n < n_f - 1; ++n) {
      if (empty(rng) && (any || n < n_f - 2)) continue;
      any = true;
      const double A = amp(rng);
      const double r1 = (2 * kPi * n + dL) / k;
      const double r2 = (2 * kPi * (n + 1) + dL) / k;
      for (Eigen::Index m = 0; m < u.size(); ++m)
        if (r_nodes(m) >= r1 && r_nodes(m) < r2) u(m) = A * std::sin(k * r_nodes(m) + dL);
    }
    WaveState psi;
    psi.amplitudes = u / u.norm();
    psi.k_label = k;
    const auto scan = scan_probabilities(psi, dets, grid);
    const double d = std::abs(wrap_half_pi(grid_argmax(scan) - dL));
    worst = std::max(worst, d);
    failures += d > step;
  }
  r.checks.push_back(make_check("max |argmax - delta_L| over 1000 draws", worst, 0.0, step, "grid step pi/100"));
  r.detail = std::to_string(failures) + " draws outside one grid step";
  r.verdict = all_pass(r.checks);
  return r;
}

CriterionReport parameter_sweep() {
  CriterionReport r{9, "Sensitivity sweep, Gaussian{2,4}, k=1.9107", {}, {}, false};
  const auto base = config_from(std::string(kGaussian24) + "[basis]\na = 0.02\npoints = 6000\n[initial]\nk = 1.9107\n",
                                "criterion9");
  // Each run snaps k to its own lattice mode k_in, so the residual against Numerov at k_in is listed
  // alongside the raw values.
  struct Point {
    double delta, residual;
  };
  auto run_at = [&](const std::string& param, double v) {
    const auto o = run_teps(with_sweep_value(base, param, v));
    const double d = o.value ? o.value->mean : std::nan("");
    return Point{d, d - std::abs(o.exact)};
  };
  auto spread = [](const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi - *lo;
  };
  auto list = [](const std::vector<Point>& ps, bool residual) {
    std::string s;
    for (const auto& p : ps) s += (s.empty() ? "" : ", ") + fixed(residual ? p.residual : p.delta, 4);
    return s;
  };
  auto deltas = [](const std::vector<Point>& ps) {
    std::vector<double> xs;
    for (const auto& p : ps) xs.push_back(p.delta);
    return xs;
  };
  std::vector<Point> r0s, as;
  for (double v : {20.0, 30.0, 40.0}) r0s.push_back(run_at("r0", v));
  for (double v : {0.02, 0.03, 0.04, 0.05}) as.push_back(run_at("a", v));
  r.checks.push_back(make_check("r0 in {20,30,40}: spread", spread(deltas(r0s)), 0.0, 0.005, list(r0s, false)));
  r.checks.push_back(make_check("a in {0.02..0.05}: drift", spread(deltas(as)), 0.0, 0.01,
                                list(as, false) + "; minus Numerov at each k_in: " + list(as, true)));
  const Point biased = run_at("r1", 0.0);
  r.checks.push_back(make_check("r1 = 0: biased |delta|", biased.delta, 1.108, 0.01,
                                "standard value " + fixed(as[0].delta, 4) + ", shift " +
                                    fixed(biased.delta - as[0].delta, 4)));
  r.verdict = all_pass(r.checks);
  return r;
}

CriterionReport hygiene() {
  CriterionReport r{10, "Propagation and spectral invariants", {}, {}, false};
  LatticeBasis lb;
  lb.a = 0.05;
  lb.points = 800;
  const Basis basis = lb;
  const UnitSystem u;
  const auto H = build_lattice_hamiltonian(lb, Gaussian{1.0, 2.0}, u, 0);
  const WaveState psi0 = prepare_initial(basis, 1.5, 0, FermiFilter{10.0, 1.0});
  const auto d = decompose(H);

  PropagatorSpec kry;
  kry.method = PropagatorSpec::Method::Krylov;
  PropagatorSpec spe;
  spe.method = PropagatorSpec::Method::Spectral;
  const double t1 = 3.7, t2 = 5.1;
  const WaveState a = evolve(psi0, H, t1 + t2, kry);
  const WaveState b = evolve(evolve(psi0, H, t1, kry), H, t2, kry);
  const WaveState s = evolve(psi0, H, t1 + t2, spe);
  r.checks.push_back(make_check("Krylov unitarity |1 - ||psi(t)|||", std::abs(1.0 - a.amplitudes.norm() / psi0.amplitudes.norm()),
                                0.0, 1e-10));
  r.checks.push_back(make_check("spectral unitarity", std::abs(1.0 - s.amplitudes.norm() / psi0.amplitudes.norm()), 0.0, 1e-12));
  const double e0 = energy_expectation(psi0, H);
  r.checks.push_back(make_check("energy drift (relative)", std::abs(energy_expectation(a, H) - e0) / std::abs(e0), 0.0, 1e-10));
  r.checks.push_back(make_check("composition U(t1)U(t2) vs U(t1+t2)", (a.amplitudes - b.amplitudes).norm(), 0.0, 1e-9));
  r.checks.push_back(make_check("Krylov vs spectral", (a.amplitudes - s.amplitudes).norm(), 0.0, 1e-9));
  const Eigen::MatrixXd Hd = H.to_dense();
  const double rec = (d.vectors * d.energies.asDiagonal() * d.vectors.transpose() - Hd).norm() / Hd.norm();
  r.checks.push_back(make_check("lattice spectral reconstruction", rec, 0.0, 1e-12));

  BesselParams bp;
  const auto bb = make_bessel_basis(bp);
  const auto Hb = build_bessel_hamiltonian(bb, Gaussian{1.0, 2.0}, u);
  const auto db = decompose(Hb);
  const Eigen::MatrixXd& S = *Hb.overlap;
  const double gen = (Hb.dense * db.vectors - S * db.vectors * db.energies.asDiagonal()).norm() / Hb.dense.norm();
  const double orth = (db.vectors.transpose() * S * db.vectors - Eigen::MatrixXd::Identity(db.vectors.cols(), db.vectors.cols())).norm();
  r.checks.push_back(make_check("Bessel H V = S V E residual", gen, 0.0, 1e-10));
  r.checks.push_back(make_check("Bessel V^T S V = I residual", orth, 0.0, 1e-10));
  const WaveState pb = prepare_initial(Basis{bb}, nearest_kinetic_momentum(Basis{bb}, u, 0.351), 0, FermiFilter{110.0, 20.0});
  const WaveState pbt = evolve(pb, db, 600.0);
  r.checks.push_back(make_check("Bessel unitarity in the S metric", std::abs(pbt.computed_norm() / pb.computed_norm() - 1.0), 0.0,
                                1e-12));
  r.verdict = all_pass(r.checks);
  return r;
}

}  // namespace

CriterionReport run_criterion(int n) {
  switch (n) {
    case 1: return oracle_fidelity();
    case 2: return teps_lattice();
    case 3: return vteps_lattice();
    case 4: return vteps_bessel();
    case 5: return shot_fit();
    case 6: return emulator_equivalence();
    case 7: return noise_mitigation();
    case 8: return multi_front();
    case 9: return parameter_sweep();
    case 10: return hygiene();
    default: throw std::out_of_range("no criterion " + std::to_string(n));
  }
}

std::string format_check(const Check& c) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "[%s] %s: value %.6g ref %.6g tol %.3g", c.pass ? "ok" : "FAIL", c.id.c_str(), c.value,
                c.reference, c.tol);
  std::string s = buf;
  if (!c.note.empty()) s += " (" + c.note + ")";
  return s;
}

std::string format_summary(const CriterionReport& r) {
  std::ostringstream os;
  os << "criterion " << r.number << ": " << (r.pass() ? "PASS" : "FAIL") << " - " << r.title;
  int ok = 0;
  for (const auto& c : r.checks) ok += c.pass;
  os << " [" << ok << "/" << r.checks.size() << " checks]";
  if (!r.detail.empty()) os << " " << r.detail;
  return os.str();
}

}  // namespace teps
