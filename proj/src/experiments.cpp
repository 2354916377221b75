#include "teps/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace teps {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string out_path(const RunConfig& cfg, const std::string& suffix) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / (cfg.prefix + "_" + suffix + ".csv")).string();
}

Metadata base_meta(const RunConfig& cfg, const std::string& command) {
  Metadata m{{"software", "teps " + software_version()}, {"command", command}};
  for (auto& kv : describe(cfg)) m.push_back(std::move(kv));
  return m;
}

double exact_phase(const RunConfig& cfg, double k) {
  return oracle_phase_shift(cfg.potential, cfg.units, k, cfg.L, cfg.oracle);
}

double fermi_r0(const RunConfig& cfg) {
  if (const auto* f = std::get_if<FermiFilter>(&cfg.filter)) return f->r0;
  return std::get<ErfFilter>(cfg.filter).r1;
}

}  // namespace

std::string software_version() { return "0.1.0"; }

std::string format_csv(const Metadata& meta, const CsvTable& table) {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("csv: row width differs from header");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
    os << "\n";
  }
  return os.str();
}

void write_csv(const std::string& path, const Metadata& meta, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << format_csv(meta, table);
}

PreparedRun prepare_run(const RunConfig& cfg) {
  PreparedRun p;
  p.basis = make_basis(cfg.basis);
  if (cfg.basis.kind == BasisChoice::Kind::Lattice)
    p.H = build_lattice_hamiltonian(std::get<LatticeBasis>(p.basis), cfg.potential, cfg.units, cfg.L);
  else
    p.H = build_bessel_hamiltonian(std::get<BesselBasis>(p.basis), cfg.potential, cfg.units);
  p.k_in = nearest_kinetic_momentum(p.basis, cfg.units, cfg.k);
  if (cfg.detector.n_i) {
    p.n_i = *cfg.detector.n_i;
    p.n_f = *cfg.detector.n_f;
  } else {
    std::tie(p.n_i, p.n_f) = window_integers(p.k_in, cfg.detector.r1, cfg.detector.width);
  }
  p.initial = prepare_initial(p.basis, p.k_in, cfg.L, cfg.filter);
  p.detector = make_detector_spec(p.k_in, cfg.L, p.n_i, p.n_f);
  p.detector.edge_gamma = cfg.detector.edge_gamma;
  p.detector_state = prepare_detector(p.basis, p.detector, cfg.detector.guard);
  p.norms = normalizations(p.initial, p.detector, p.basis);
  return p;
}

TepsOutcome run_teps(const RunConfig& cfg) {
  PreparedRun p = prepare_run(cfg);
  TepsOutcome o;
  o.k_in = p.k_in;
  o.n_i = p.n_i;
  o.n_f = p.n_f;
  o.norms = p.norms;
  o.tau = plateau_onset(p.k_in, fermi_r0(cfg), p.detector.r1, p.detector.r2, cfg.units.kinetic_coeff);
  o.series.times = cfg.time.grid();
  const auto states = evolve_series(p.initial, p.H, o.series.times, cfg.propagator);
  for (const auto& s : states) {
    const double P = overlap_probability(p.detector_state, s);
    bool clamped = false;
    o.series.P.push_back(P);
    o.series.delta_abs.push_back(teps_phase(P, p.norms.c_L, &clamped));
    o.clamped += clamped;
  }
  if (o.series.times.size() >= static_cast<std::size_t>(cfg.time.plateau_window)) {
    o.series.plateau = detect_plateau(o.series, static_cast<std::size_t>(cfg.time.plateau_window), cfg.time.var_tol, o.tau);
    if (o.series.plateau) o.value = average_plateau(o.series, *o.series.plateau);
  }
  o.exact = exact_phase(cfg, p.k_in);
  return o;
}

VtepsOutcome run_vteps(const RunConfig& cfg) {
  PreparedRun p = prepare_run(cfg);
  VtepsOutcome o;
  o.k_in = p.k_in;
  o.n_i = p.n_i;
  o.n_f = p.n_f;
  o.tau = plateau_onset(p.k_in, fermi_r0(cfg), p.detector.r1, p.detector.r2, cfg.units.kinetic_coeff);
  o.times = cfg.time.t ? std::vector<double>{*cfg.time.t} : cfg.time.grid();
  const auto grid = delta_grid(cfg.scan.points);
  const auto dets = detector_family(p.basis, p.k_in, cfg.L, p.n_i, p.n_f, grid, cfg.detector.guard, cfg.detector.edge_gamma);
  const auto states = evolve_series(p.initial, p.H, o.times, cfg.propagator);
  for (std::size_t i = 0; i < states.size(); ++i) {
    o.scans.push_back(scan_probabilities(states[i], dets, grid, cfg.scan.shots, cfg.scan.seed + i));
    o.fits.push_back(fit_cos2(o.scans.back(), cfg.scan.offset));
    o.delta_star.push_back(o.fits.back().maximizer.value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  if (o.times.size() == 1) {
    if (std::isfinite(o.delta_star[0])) {
      o.plateau = Interval{o.times[0], o.times[0], 0, 0};
      o.value = MeanStd{o.delta_star[0], o.fits[0].sigma_B};
    }
  } else if (o.times.size() >= static_cast<std::size_t>(cfg.time.plateau_window)) {
    std::vector<double> finite = o.delta_star;
    for (double& d : finite)
      if (!std::isfinite(d)) d = 1e3;  // never flat
    o.plateau = detect_plateau(o.times, finite, static_cast<std::size_t>(cfg.time.plateau_window), cfg.time.var_tol, o.tau);
    if (o.plateau) o.value = average_plateau(o.delta_star, *o.plateau);
  }
  o.exact = exact_phase(cfg, p.k_in);
  return o;
}

OracleOutcome run_oracle(const RunConfig& cfg) {
  OracleOutcome o;
  o.k = cfg.k;
  o.energy = cfg.units.kinetic_coeff * cfg.k * cfg.k;
  o.delta = exact_phase(cfg, cfg.k);
  return o;
}

RunConfig with_sweep_value(const RunConfig& cfg, const std::string& parameter, double v) {
  RunConfig c = cfg;
  auto& lat = c.basis.lattice;
  if (parameter == "points") {
    lat.points = static_cast<int>(std::lround(v));
  } else if (parameter == "a") {
    lat.a = v;
  } else if (parameter == "fixed_volume_a") {
    const double volume = lat.a * lat.points;
    lat.a = v;
    lat.points = static_cast<int>(std::lround(volume / v));
  } else if (parameter == "gamma" || parameter == "r0") {
    auto* f = std::get_if<FermiFilter>(&c.filter);
    if (!f) throw std::invalid_argument("sweep: " + parameter + " needs a Fermi filter");
    (parameter == "gamma" ? f->gamma : f->r0) = v;
  } else if (parameter == "r1") {
    c.detector.n_i.reset();
    c.detector.n_f.reset();
    c.detector.r1 = v;
  } else if (parameter == "width") {
    c.detector.n_i.reset();
    c.detector.n_f.reset();
    c.detector.width = v;
  } else {
    throw std::invalid_argument("sweep: unknown parameter '" + parameter + "'");
  }
  if (c.basis.kind != BasisChoice::Kind::Lattice) throw std::invalid_argument("sweep: lattice bases only");
  lat.validate();
  return c;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
  if (cfg.sweep.parameter.empty() || cfg.sweep.values.empty())
    throw std::invalid_argument("sweep: set sweep.parameter and sweep.values");
  std::vector<SweepRow> rows;
  for (double v : cfg.sweep.values) rows.push_back({v, run_teps(with_sweep_value(cfg, cfg.sweep.parameter, v))});
  return rows;
}

EmulateOutcome run_emulate(const RunConfig& cfg) {
  if (cfg.basis.kind != BasisChoice::Kind::Bessel) throw std::invalid_argument("emulate: needs a Bessel basis");
  PreparedRun p = prepare_run(cfg);
  const SpectralDecomposition d = decompose(p.H);
  const qemu::EmulatorModel model = qemu::make_emulator_model(d, p.initial);
  EmulateOutcome o;
  o.qubits = model.n;
  o.k_in = p.k_in;
  o.lambda = cfg.noise.lambda;
  o.times = cfg.time.grid();
  std::optional<qemu::NoiseModel> noise;
  if (cfg.noise.lambda) noise = qemu::NoiseModel{*cfg.noise.lambda};
  std::mt19937_64 rng(cfg.scan.seed);

  const Eigen::VectorXd det0 = qemu::eigen_amplitudes(d, p.detector_state, model.n);
  const auto classical = evolve_series(p.initial, d, o.times);
  double p_id = 1.0;
  if (noise) p_id = qemu::emulate_identity_reference(model, cfg.scan.shots, noise, rng);
  for (std::size_t i = 0; i < o.times.size(); ++i) {
    o.P_classical.push_back(overlap_probability(p.detector_state, classical[i]));
    std::mt19937_64 unused;
    o.P_ideal.push_back(qemu::emulate_overlap(model, det0, o.times[i], std::nullopt, std::nullopt, unused));
    o.max_abs_diff = std::max(o.max_abs_diff, std::abs(o.P_ideal.back() - o.P_classical.back()));
    if (noise) {
      o.P_noisy.push_back(qemu::emulate_overlap(model, det0, o.times[i], cfg.scan.shots, noise, rng));
      o.P_dr.push_back(qemu::decoherence_renormalize({o.P_noisy.back(), p_id, 1.0, model.n}).P);
    }
  }
  if (o.times.size() >= static_cast<std::size_t>(cfg.time.plateau_window)) {
    const double tau = plateau_onset(p.k_in, fermi_r0(cfg), p.detector.r1, p.detector.r2, cfg.units.kinetic_coeff);
    o.plateau = detect_plateau(o.times, o.P_ideal, static_cast<std::size_t>(cfg.time.plateau_window), cfg.time.var_tol, tau);
  }

  o.t_scan = cfg.time.t ? *cfg.time.t : (o.plateau ? 0.5 * (o.plateau->t_a + o.plateau->t_b) : o.times.back());
  const auto grid = delta_grid(cfg.scan.points);
  const auto dets = detector_family(p.basis, p.k_in, cfg.L, p.n_i, p.n_f, grid, cfg.detector.guard, cfg.detector.edge_gamma);
  std::vector<Eigen::VectorXd> amps;
  for (const auto& s : dets) amps.push_back(qemu::eigen_amplitudes(d, s, model.n));
  o.scan_classical = scan_probabilities(evolve(p.initial, d, o.t_scan), dets, grid);
  o.scan_ideal = qemu::run_vteps_on_emulator(model, amps, grid, o.t_scan, std::nullopt, std::nullopt, cfg.scan.seed);
  for (std::size_t i = 0; i < grid.size(); ++i)
    o.max_abs_diff = std::max(o.max_abs_diff, std::abs(o.scan_ideal.P[i] - o.scan_classical.P[i]));
  o.fit_ideal = fit_cos2(o.scan_ideal, false);
  o.circuit = "# overlap circuit, t = " + fmt(o.t_scan) + ", delta_V = 0\n" +
              qemu::serialize(qemu::overlap_circuit(model, det0, o.t_scan));
  if (noise) {
    o.scan_noisy = qemu::run_vteps_on_emulator(model, amps, grid, o.t_scan, cfg.scan.shots, noise, cfg.scan.seed + 1);
    o.fit_noisy = fit_cos2(o.scan_noisy, true);
    o.scan_dr = o.scan_noisy;
    for (double& x : o.scan_dr.P) x = qemu::decoherence_renormalize({x, p_id, 1.0, model.n}).P;
    o.fit_dr = fit_cos2(o.scan_dr, false);
  }
  o.exact = exact_phase(cfg, p.k_in);
  return o;
}

std::vector<std::string> write_teps(const RunConfig& cfg, const TepsOutcome& o) {
  Metadata m = base_meta(cfg, "teps");
  m.insert(m.end(), {{"result.k_in", fmt(o.k_in)},
                     {"result.n_i", std::to_string(o.n_i)},
                     {"result.n_f", std::to_string(o.n_f)},
                     {"result.c_init", fmt(o.norms.c_init)},
                     {"result.c_dect", fmt(o.norms.c_dect)},
                     {"result.c_L", fmt(o.norms.c_L)},
                     {"result.tau", fmt(o.tau)},
                     {"result.clamped_points", std::to_string(o.clamped)},
                     {"result.exact_delta", fmt(o.exact)}});
  if (o.series.plateau) {
    m.emplace_back("result.plateau_t_a", fmt(o.series.plateau->t_a));
    m.emplace_back("result.plateau_t_b", fmt(o.series.plateau->t_b));
  }
  if (o.value) {
    m.emplace_back("result.delta_abs_mean", fmt(o.value->mean));
    m.emplace_back("result.delta_abs_std", fmt(o.value->std));
  }
  CsvTable t{{"t", "P", "delta_abs", "in_plateau"}, {}};
  for (std::size_t i = 0; i < o.series.times.size(); ++i) {
    const bool in = o.series.plateau && i >= o.series.plateau->i_a && i <= o.series.plateau->i_b;
    t.rows.push_back({o.series.times[i], o.series.P[i], o.series.delta_abs[i], in ? 1.0 : 0.0});
  }
  const auto path = out_path(cfg, "teps");
  write_csv(path, m, t);
  return {path};
}

std::vector<std::string> write_vteps(const RunConfig& cfg, const VtepsOutcome& o) {
  Metadata m = base_meta(cfg, "vteps");
  m.insert(m.end(), {{"result.k_in", fmt(o.k_in)},
                     {"result.n_i", std::to_string(o.n_i)},
                     {"result.n_f", std::to_string(o.n_f)},
                     {"result.tau", fmt(o.tau)},
                     {"result.exact_delta", fmt(o.exact)}});
  if (o.plateau) {
    m.emplace_back("result.plateau_t_a", fmt(o.plateau->t_a));
    m.emplace_back("result.plateau_t_b", fmt(o.plateau->t_b));
  }
  if (o.value) {
    m.emplace_back("result.delta_mean", fmt(o.value->mean));
    m.emplace_back("result.delta_std", fmt(o.value->std));
  }
  CsvTable scan{{"t", "delta_V", "P"}, {}};
  CsvTable fit{{"t", "A", "B", "C", "sigma_A", "sigma_B", "sigma_C", "residual", "degenerate", "delta_star"}, {}};
  for (std::size_t i = 0; i < o.times.size(); ++i) {
    for (std::size_t j = 0; j < o.scans[i].P.size(); ++j) scan.rows.push_back({o.times[i], o.scans[i].delta_V[j], o.scans[i].P[j]});
    const auto& f = o.fits[i];
    fit.rows.push_back({o.times[i], f.A, f.B, f.C.value_or(0.0), f.sigma_A, f.sigma_B, f.sigma_C, f.residual,
                        f.degenerate ? 1.0 : 0.0, o.delta_star[i]});
  }
  const auto p1 = out_path(cfg, "vteps_scan");
  const auto p2 = out_path(cfg, "vteps_fit");
  write_csv(p1, m, scan);
  write_csv(p2, m, fit);
  return {p1, p2};
}

std::vector<std::string> write_oracle(const RunConfig& cfg, const OracleOutcome& o) {
  Metadata m = base_meta(cfg, "oracle");
  const auto path = out_path(cfg, "oracle");
  write_csv(path, m, CsvTable{{"k", "E", "L", "delta"}, {{o.k, o.energy, static_cast<double>(cfg.L), o.delta}}});
  return {path};
}

std::vector<std::string> write_sweep(const RunConfig& cfg, const std::vector<SweepRow>& rows) {
  Metadata m = base_meta(cfg, "sweep");
  CsvTable t{{"value", "k_in", "n_i", "n_f", "plateau_t_a", "plateau_t_b", "delta_abs_mean", "delta_abs_std", "exact"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    const auto& o = r.outcome;
    t.rows.push_back({r.value, o.k_in, static_cast<double>(o.n_i), static_cast<double>(o.n_f),
                      o.series.plateau ? o.series.plateau->t_a : nan, o.series.plateau ? o.series.plateau->t_b : nan,
                      o.value ? o.value->mean : nan, o.value ? o.value->std : nan, o.exact});
  }
  const auto path = out_path(cfg, "sweep");
  write_csv(path, m, t);
  return {path};
}

std::vector<std::string> write_emulate(const RunConfig& cfg, const EmulateOutcome& o) {
  Metadata m = base_meta(cfg, "emulate");
  m.insert(m.end(), {{"result.qubits", std::to_string(o.qubits)},
                     {"result.k_in", fmt(o.k_in)},
                     {"result.max_abs_diff_vs_classical", fmt(o.max_abs_diff)},
                     {"result.t_scan", fmt(o.t_scan)},
                     {"result.exact_delta", fmt(o.exact)}});
  if (o.plateau) {
    m.emplace_back("result.plateau_t_a", fmt(o.plateau->t_a));
    m.emplace_back("result.plateau_t_b", fmt(o.plateau->t_b));
  }
  auto add_fit = [&](const std::string& name, const FitResult& f) {
    m.emplace_back("result." + name + ".A", fmt(f.A));
    m.emplace_back("result." + name + ".B", fmt(f.B));
    if (f.C) m.emplace_back("result." + name + ".C", fmt(*f.C));
    m.emplace_back("result." + name + ".sigma_B", fmt(f.sigma_B));
    if (f.maximizer) m.emplace_back("result." + name + ".delta_star", fmt(*f.maximizer));
  };
  add_fit("fit_ideal", o.fit_ideal);
  if (o.fit_noisy) add_fit("fit_noisy", *o.fit_noisy);
  if (o.fit_dr) add_fit("fit_dr", *o.fit_dr);
  const bool noisy = !o.P_noisy.empty();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CsvTable ts{{"t", "P_classical", "P_ideal", "P_noisy", "P_dr"}, {}};
  for (std::size_t i = 0; i < o.times.size(); ++i)
    ts.rows.push_back({o.times[i], o.P_classical[i], o.P_ideal[i], noisy ? o.P_noisy[i] : nan, noisy ? o.P_dr[i] : nan});
  CsvTable sc{{"delta_V", "P_classical", "P_ideal", "P_noisy", "P_dr"}, {}};
  for (std::size_t i = 0; i < o.scan_ideal.P.size(); ++i)
    sc.rows.push_back({o.scan_ideal.delta_V[i], o.scan_classical.P[i], o.scan_ideal.P[i], noisy ? o.scan_noisy.P[i] : nan,
                       noisy ? o.scan_dr.P[i] : nan});
  const auto p1 = out_path(cfg, "emulate_time");
  const auto p2 = out_path(cfg, "emulate_scan");
  write_csv(p1, m, ts);
  write_csv(p2, m, sc);
  const auto p3 = (std::filesystem::path(cfg.out_dir) / (cfg.prefix + "_circuit.txt")).string();
  std::ofstream(p3) << o.circuit;
  return {p1, p2, p3};
}

}  // namespace teps
