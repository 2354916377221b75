#include "teps/qemu.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace teps::qemu {

using cd = std::complex<double>;

namespace {

std::size_t dim(int n) { return std::size_t{1} << n; }

std::size_t mask(int n, int q) { return std::size_t{1} << (n - 1 - q); }

void apply_1q(StateVector& s, int n, int q, const Eigen::Matrix2cd& U) {
  const std::size_t m = mask(n, q);
  for (std::size_t i = 0; i < dim(n); ++i) {
    if (i & m) continue;
    const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | m);
    const cd a = s(i0), b = s(i1);
    s(i0) = U(0, 0) * a + U(0, 1) * b;
    s(i1) = U(1, 0) * a + U(1, 1) * b;
  }
}

const char* name_of(Gate::Kind k) {
  switch (k) {
    case Gate::Kind::Ry: return "ry";
    case Gate::Kind::Rz: return "rz";
    case Gate::Kind::U3: return "u3";
    case Gate::Kind::CNOT: return "cnot";
    case Gate::Kind::CZ: return "cz";
    case Gate::Kind::DiagonalPhase: return "diag";
  }
  return "?";
}

}  // namespace

void Circuit::validate() const {
  if (n < 1 || n > 24) throw std::invalid_argument("circuit: qubit count out of range");
  for (const auto& g : gates) {
    for (int q : g.qubits)
      if (q < 0 || q >= n) throw std::out_of_range("circuit: qubit index out of range");
    for (double a : g.angles)
      if (!std::isfinite(a)) throw std::invalid_argument("circuit: non-finite angle");
    std::size_t nq = 1, na = 1;
    switch (g.kind) {
      case Gate::Kind::Ry:
      case Gate::Kind::Rz: break;
      case Gate::Kind::U3: na = 3; break;
      case Gate::Kind::CNOT:
      case Gate::Kind::CZ: nq = 2; na = 0; break;
      case Gate::Kind::DiagonalPhase: nq = static_cast<std::size_t>(n); na = dim(n); break;
    }
    if (g.qubits.size() != nq || g.angles.size() != na) throw std::invalid_argument("circuit: malformed gate");
    if (nq == 2 && g.qubits[0] == g.qubits[1]) throw std::invalid_argument("circuit: control equals target");
  }
}

std::size_t Circuit::count(Gate::Kind k) const {
  return static_cast<std::size_t>(std::count_if(gates.begin(), gates.end(), [k](const Gate& g) { return g.kind == k; }));
}

StateVector zero_state(int n) {
  StateVector s = StateVector::Zero(static_cast<Eigen::Index>(dim(n)));
  s(0) = 1.0;
  return s;
}

Gate ry(int q, double theta) { return {Gate::Kind::Ry, {q}, {theta}}; }
Gate rz(int q, double theta) { return {Gate::Kind::Rz, {q}, {theta}}; }
Gate u3(int q, double theta, double phi, double lambda) { return {Gate::Kind::U3, {q}, {theta, phi, lambda}}; }
Gate cnot(int control, int target) { return {Gate::Kind::CNOT, {control, target}, {}}; }
Gate cz(int control, int target) { return {Gate::Kind::CZ, {control, target}, {}}; }
Gate diagonal_phase(int n, std::vector<double> phases) {
  Gate g{Gate::Kind::DiagonalPhase, {}, std::move(phases)};
  for (int q = 0; q < n; ++q) g.qubits.push_back(q);
  return g;
}

StateVector apply_circuit(const Circuit& c, StateVector s) {
  c.validate();
  if (s.size() != static_cast<Eigen::Index>(dim(c.n))) throw std::invalid_argument("apply_circuit: state size mismatch");
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case Gate::Kind::Ry: {
        const double h = g.angles[0] / 2.0;
        Eigen::Matrix2cd U;
        U << std::cos(h), -std::sin(h), std::sin(h), std::cos(h);
        apply_1q(s, c.n, g.qubits[0], U);
        break;
      }
      case Gate::Kind::Rz: {
        const double h = g.angles[0] / 2.0;
        Eigen::Matrix2cd U;
        U << std::exp(cd(0, -h)), 0.0, 0.0, std::exp(cd(0, h));
        apply_1q(s, c.n, g.qubits[0], U);
        break;
      }
      case Gate::Kind::U3: {
        const double th = g.angles[0] / 2.0, ph = g.angles[1], la = g.angles[2];
        Eigen::Matrix2cd U;
        U << std::cos(th), -std::exp(cd(0, la)) * std::sin(th), std::exp(cd(0, ph)) * std::sin(th),
            std::exp(cd(0, ph + la)) * std::cos(th);
        apply_1q(s, c.n, g.qubits[0], U);
        break;
      }
      case Gate::Kind::CNOT: {
        const std::size_t mc = mask(c.n, g.qubits[0]), mt = mask(c.n, g.qubits[1]);
        for (std::size_t i = 0; i < dim(c.n); ++i)
          if ((i & mc) && !(i & mt)) std::swap(s(static_cast<Eigen::Index>(i)), s(static_cast<Eigen::Index>(i | mt)));
        break;
      }
      case Gate::Kind::CZ: {
        const std::size_t mc = mask(c.n, g.qubits[0]), mt = mask(c.n, g.qubits[1]);
        for (std::size_t i = 0; i < dim(c.n); ++i)
          if ((i & mc) && (i & mt)) s(static_cast<Eigen::Index>(i)) = -s(static_cast<Eigen::Index>(i));
        break;
      }
      case Gate::Kind::DiagonalPhase:
        for (std::size_t i = 0; i < dim(c.n); ++i) s(static_cast<Eigen::Index>(i)) *= std::exp(cd(0, g.angles[i]));
        break;
    }
  }
  return s;
}

Circuit graycode_real_prep(const Eigen::VectorXd& target, int n, bool odd_L) {
  if (n < 1 || target.size() != static_cast<Eigen::Index>(dim(n)))
    throw std::invalid_argument("graycode_real_prep: target length must be 2^n");
  if (!target.allFinite()) throw std::invalid_argument("graycode_real_prep: non-finite amplitude");
  if (std::abs(target.norm() - 1.0) > 1e-9) throw std::invalid_argument("graycode_real_prep: target not normalized");

  // Block norms: level l has 2^l blocks of size 2^(n-l).
  Circuit c;
  c.n = n;
  for (int l = 0; l < n; ++l) {
    const std::size_t blocks = dim(l);
    const std::size_t half = dim(n - l - 1);
    std::vector<double> alpha(blocks);
    for (std::size_t j = 0; j < blocks; ++j) {
      const auto start = static_cast<Eigen::Index>(j * 2 * half);
      const auto h = static_cast<Eigen::Index>(half);
      if (l == n - 1) {
        alpha[j] = 2.0 * std::atan2(target(start + 1), target(start));
      } else {
        alpha[j] = 2.0 * std::atan2(target.segment(start + h, h).norm(), target.segment(start, h).norm());
      }
    }
    if (l == 0) {
      c.gates.push_back(ry(0, alpha[0]));
      continue;
    }
    // theta'_i = 2^-l sum_j (-1)^{popcount(j & gray(i))} alpha_j; bit b of j is control qubit l-1-b.
    for (std::size_t i = 0; i < blocks; ++i) {
      const std::size_t gi = i ^ (i >> 1);
      double th = 0.0;
      for (std::size_t j = 0; j < blocks; ++j) th += (std::popcount(j & gi) % 2 ? -1.0 : 1.0) * alpha[j];
      c.gates.push_back(ry(l, th / static_cast<double>(blocks)));
      const int bit = (i + 1 < blocks) ? std::countr_zero(i + 1) : l - 1;
      c.gates.push_back(cnot(l - 1 - bit, l));
    }
  }
  if (odd_L) c.gates.push_back(diagonal_phase(n, std::vector<double>(dim(n), std::numbers::pi / 2.0)));
  return c;
}

Circuit inverse_circuit(const Circuit& c) {
  Circuit inv;
  inv.n = c.n;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case Gate::Kind::Ry:
      case Gate::Kind::Rz:
      case Gate::Kind::DiagonalPhase:
        for (double& a : g.angles) a = -a;
        break;
      case Gate::Kind::U3:
        g.angles = {-it->angles[0], -it->angles[2], -it->angles[1]};
        break;
      default: break;
    }
    inv.gates.push_back(std::move(g));
  }
  return inv;
}

Circuit diagonal_evolution(const Eigen::VectorXd& energies, double t, int n) {
  if (energies.size() > static_cast<Eigen::Index>(dim(n))) throw std::invalid_argument("diagonal_evolution: too many energies");
  std::vector<double> ph(dim(n), 0.0);
  for (Eigen::Index j = 0; j < energies.size(); ++j) ph[static_cast<std::size_t>(j)] = -energies(j) * t;
  Circuit c;
  c.n = n;
  c.gates.push_back(diagonal_phase(n, std::move(ph)));
  return c;
}

Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.n != b.n) throw std::invalid_argument("concat: qubit counts differ");
  Circuit c = a;
  c.gates.insert(c.gates.end(), b.gates.begin(), b.gates.end());
  return c;
}

void NoiseModel::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("noise: lambda must lie in [0, 1]");
}

double depolarize(double p, const NoiseModel& noise, int n) {
  noise.validate();
  return noise.lambda * p + (1.0 - noise.lambda) / static_cast<double>(dim(n));
}

double measure_all_zero_prob(const StateVector& s, std::optional<long> shots, std::optional<NoiseModel> noise,
                             std::mt19937_64& rng) {
  const int n = std::countr_zero(static_cast<std::size_t>(s.size()));
  if (s.size() < 2 || (std::size_t{1} << n) != static_cast<std::size_t>(s.size()))
    throw std::invalid_argument("measure: state size is not a power of two");
  double p = std::min(1.0, std::norm(s(0)));
  if (noise) p = depolarize(p, *noise, n);
  if (shots) p = sample_probability(p, *shots, rng);
  return p;
}

double measure_all_zero_prob(const StateVector& s, std::optional<long> shots, std::optional<NoiseModel> noise,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return measure_all_zero_prob(s, shots, noise, rng);
}

DRResult decoherence_renormalize(const DRInputs& in) {
  for (double p : {in.P_phys_noisy, in.P_id_noisy, in.P_id_ex})
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("DR: probabilities must lie in [0, 1]");
  if (in.n < 1) throw std::invalid_argument("DR: qubit count must be positive");
  const double floor = 1.0 / static_cast<double>(dim(in.n));
  if (std::abs(in.P_id_noisy - floor) < 1e-9) throw std::domain_error("DR: reference sits on the decoherence line");
  const double P = (in.P_id_ex - floor) / (in.P_id_noisy - floor) * (in.P_phys_noisy - floor) + floor;
  DRResult r;
  r.P = std::clamp(P, 0.0, 1.0);
  r.clamped = r.P != P;
  return r;
}

std::string serialize(const Circuit& c) {
  c.validate();
  std::ostringstream os;
  os << std::setprecision(17);
  os << "qubits " << c.n << "\n";
  for (const auto& g : c.gates) {
    os << name_of(g.kind) << ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) os << (i ? "," : "") << g.qubits[i];
    os << ' ';
    if (g.angles.empty()) os << '-';
    for (std::size_t i = 0; i < g.angles.size(); ++i) os << (i ? "," : "") << g.angles[i];
    os << "\n";
  }
  return os.str();
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  Circuit c;
  bool have_header = false;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("circuit line " + std::to_string(lineno) + ": " + why);
  };
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string name, qs, as;
    if (!(ls >> name)) continue;
    if (!have_header) {
      if (name != "qubits" || !(ls >> c.n)) fail("expected 'qubits <n>' header");
      have_header = true;
      continue;
    }
    if (!(ls >> qs >> as)) fail("expected '<name> <qubits> <angles>'");
    Gate g;
    if (name == "ry") g.kind = Gate::Kind::Ry;
    else if (name == "rz") g.kind = Gate::Kind::Rz;
    else if (name == "u3") g.kind = Gate::Kind::U3;
    else if (name == "cnot") g.kind = Gate::Kind::CNOT;
    else if (name == "cz") g.kind = Gate::Kind::CZ;
    else if (name == "diag") g.kind = Gate::Kind::DiagonalPhase;
    else fail("unknown gate '" + name + "'");
    try {
      for (const auto& q : split(qs)) g.qubits.push_back(std::stoi(q));
      if (as != "-")
        for (const auto& a : split(as)) g.angles.push_back(std::stod(a));
    } catch (const std::logic_error&) {
      fail("bad number");
    }
    c.gates.push_back(std::move(g));
  }
  if (!have_header) throw std::invalid_argument("circuit: empty description");
  c.validate();
  return c;
}

Eigen::VectorXd eigen_amplitudes(const SpectralDecomposition& d, const WaveState& s, int n) {
  const Eigen::VectorXcd c = d.to_eigen(s.amplitudes);
  if (c.imag().norm() > 1e-10 * std::max(1.0, c.norm()))
    throw std::invalid_argument("eigen_amplitudes: state is not real in the eigenbasis");
  if (c.size() > static_cast<Eigen::Index>(dim(n))) throw std::invalid_argument("eigen_amplitudes: too few qubits");
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim(n)));
  a.head(c.size()) = c.real();
  return a / a.norm();
}

EmulatorModel make_emulator_model(const SpectralDecomposition& d, const WaveState& initial) {
  EmulatorModel m;
  m.n = std::max(1, static_cast<int>(std::bit_width(static_cast<std::size_t>(d.energies.size() - 1))));
  m.energies = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim(m.n)));
  m.energies.head(d.energies.size()) = d.energies;
  m.initial = eigen_amplitudes(d, initial, m.n);
  m.decomposition = d;
  return m;
}

Circuit overlap_circuit(const EmulatorModel& m, const Eigen::VectorXd& detector_amplitudes, double t) {
  Circuit c = graycode_real_prep(m.initial, m.n);
  c = concat(c, diagonal_evolution(m.energies, t, m.n));
  return concat(c, inverse_circuit(graycode_real_prep(detector_amplitudes, m.n)));
}

double emulate_overlap(const EmulatorModel& m, const Eigen::VectorXd& detector_amplitudes, double t,
                       std::optional<long> shots, std::optional<NoiseModel> noise, std::mt19937_64& rng) {
  const StateVector s = apply_circuit(overlap_circuit(m, detector_amplitudes, t), zero_state(m.n));
  return measure_all_zero_prob(s, shots, noise, rng);
}

double emulate_identity_reference(const EmulatorModel& m, std::optional<long> shots, std::optional<NoiseModel> noise,
                                  std::mt19937_64& rng) {
  const Circuit g = graycode_real_prep(m.initial, m.n);
  const StateVector s = apply_circuit(concat(g, inverse_circuit(g)), zero_state(m.n));
  return measure_all_zero_prob(s, shots, noise, rng);
}

ScanResult run_vteps_on_emulator(const EmulatorModel& m, const std::vector<Eigen::VectorXd>& detectors,
                                 const std::vector<double>& grid, double t, std::optional<long> shots,
                                 std::optional<NoiseModel> noise, std::uint64_t seed) {
  if (detectors.size() != grid.size()) throw std::invalid_argument("emulator scan: detector/grid size mismatch");
  std::mt19937_64 rng(seed);
  ScanResult r;
  r.delta_V = grid;
  r.shots = shots;
  for (const auto& d : detectors) r.P.push_back(emulate_overlap(m, d, t, shots, noise, rng));
  return r;
}

}  // namespace teps::qemu
