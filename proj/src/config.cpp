#include "teps/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace teps {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

const std::vector<std::string>* keys_of(const std::string& section) {
  for (const auto& [name, keys] : config_schema())
    if (name == section) return &keys;
  return nullptr;
}

void check_key(const std::string& section, const std::string& key, const std::string& source, int line) {
  const auto* keys = keys_of(section);
  if (!keys) throw ConfigError(source, line, "unknown section [" + section + "]");
  if (std::find(keys->begin(), keys->end(), key) == keys->end())
    throw ConfigError(source, line, "unknown key '" + key + "' in [" + section + "]");
}

// Typed accessors that report the line of the offending entry.
class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const RawEntry* entry(const std::string& s, const std::string& k) const { return raw_.find(s, k); }

  [[noreturn]] void fail(const RawEntry& e, const std::string& msg) const { throw ConfigError(e.source, e.line, msg); }

  void real(const std::string& s, const std::string& k, double& out) const {
    if (const auto* e = entry(s, k)) out = parse_real(*e, s + "." + k);
  }
  void real(const std::string& s, const std::string& k, std::optional<double>& out) const {
    if (const auto* e = entry(s, k)) out = parse_real(*e, s + "." + k);
  }
  void positive(const std::string& s, const std::string& k, double& out) const {
    if (const auto* e = entry(s, k)) {
      out = parse_real(*e, s + "." + k);
      if (!(out > 0.0)) fail(*e, s + "." + k + " must be positive");
    }
  }
  template <typename Int>
  void integer(const std::string& s, const std::string& k, Int& out) const {
    if (const auto* e = entry(s, k)) out = static_cast<Int>(parse_int(*e, s + "." + k));
  }
  template <typename Int>
  void integer(const std::string& s, const std::string& k, std::optional<Int>& out) const {
    if (const auto* e = entry(s, k)) out = static_cast<Int>(parse_int(*e, s + "." + k));
  }
  void boolean(const std::string& s, const std::string& k, bool& out) const {
    if (const auto* e = entry(s, k)) {
      if (e->value == "true" || e->value == "yes" || e->value == "1") out = true;
      else if (e->value == "false" || e->value == "no" || e->value == "0") out = false;
      else fail(*e, s + "." + k + ": expected true or false, got '" + e->value + "'");
    }
  }
  void text(const std::string& s, const std::string& k, std::string& out) const {
    if (const auto* e = entry(s, k)) out = e->value;
  }
  std::string choice(const std::string& s, const std::string& k, const std::string& def,
                     const std::vector<std::string>& allowed) const {
    const auto* e = entry(s, k);
    if (!e) return def;
    if (std::find(allowed.begin(), allowed.end(), e->value) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(*e, s + "." + k + ": '" + e->value + "' is not one of {" + list + "}");
    }
    return e->value;
  }
  std::vector<double> list(const std::string& s, const std::string& k) const {
    std::vector<double> out;
    const auto* e = entry(s, k);
    if (!e) return out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      RawEntry sub = *e;
      sub.value = trim(item);
      out.push_back(parse_real(sub, s + "." + k));
    }
    return out;
  }

 private:
  double parse_real(const RawEntry& e, const std::string& name) const {
    double v = 0.0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v)) fail(e, name + ": expected a number, got '" + e.value + "'");
    return v;
  }
  long long parse_int(const RawEntry& e, const std::string& name) const {
    long long v = 0;
    const char* b = e.value.data();
    const char* end = b + e.value.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) fail(e, name + ": expected an integer, got '" + e.value + "'");
    return v;
  }
  const RawConfig& raw_;
};

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + msg), source_(source), line_(line) {}

const RawEntry* RawConfig::find(const std::string& section, const std::string& key) const {
  auto s = sections.find(section);
  if (s == sections.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& config_schema() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> schema = {
      {"units", {"length_unit", "energy_unit", "kinetic_coeff"}},
      {"potential", {"type", "V0", "sigma", "epsilon", "r_core", "table"}},
      {"basis", {"type", "a", "points", "k0", "dk", "nk", "r_max", "reg_gamma", "quad_step"}},
      {"initial", {"k", "L", "filter", "r0", "gamma", "r1", "r2", "amplitude"}},
      {"detector", {"n_i", "n_f", "r1", "width", "edge_gamma", "inner_limit", "wall_margin"}},
      {"time", {"start", "stop", "step", "t", "plateau_window", "var_tol"}},
      {"scan", {"points", "shots", "seed", "offset"}},
      {"propagator", {"method", "krylov_dim", "krylov_tol", "spectral_max_points"}},
      {"noise", {"lambda", "dr"}},
      {"oracle", {"step", "r_min", "asymptotic_tol"}},
      {"sweep", {"parameter", "values"}},
      {"output", {"dir", "prefix"}},
  };
  return schema;
}

RawConfig parse_ini(const std::string& text, const std::string& source) {
  RawConfig raw;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!keys_of(section)) throw ConfigError(source, lineno, "unknown section [" + section + "]");
      raw.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    if (section.empty()) throw ConfigError(source, lineno, "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(source, lineno, "empty key");
    if (value.empty()) throw ConfigError(source, lineno, "empty value for '" + key + "'");
    check_key(section, key, source, lineno);
    auto& sec = raw.sections[section];
    if (auto it = sec.find(key); it != sec.end())
      throw ConfigError(source, lineno,
                        "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    sec[key] = RawEntry{value, source, lineno};
  }
  return raw;
}

RawConfig load_ini(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str(), path);
}

void apply_override(RawConfig& raw, const std::string& assignment, const std::string& source) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
    throw ConfigError(source, 0, "expected section.key=value, got '" + assignment + "'");
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));
  check_key(section, key, source, 0);
  if (value.empty()) throw ConfigError(source, 0, "empty value for '" + section + "." + key + "'");
  raw.sections[section][key] = RawEntry{value, source, 0};
}

std::vector<double> TimeConfig::grid() const {
  if (!(step > 0.0) || stop < start || start < 0.0) throw std::invalid_argument("time grid: need 0 <= start <= stop, step > 0");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(start + step * static_cast<double>(i));
  return g;
}

RunConfig resolve(const RawConfig& raw) {
  Reader rd(raw);
  RunConfig c;

  rd.text("units", "length_unit", c.units.length_unit);
  rd.text("units", "energy_unit", c.units.energy_unit);
  rd.positive("units", "kinetic_coeff", c.units.kinetic_coeff);

  c.potential_type = rd.choice("potential", "type", "gaussian", {"gaussian", "lennard_jones", "tabulated", "free"});
  if (c.potential_type == "gaussian" || c.potential_type == "free") {
    Gaussian g;
    rd.real("potential", "V0", g.V0);
    rd.positive("potential", "sigma", g.sigma);
    if (c.potential_type == "free") g.V0 = 0.0;
    c.potential = g;
  } else if (c.potential_type == "lennard_jones") {
    LennardJones lj;
    rd.real("potential", "epsilon", lj.epsilon);
    rd.positive("potential", "sigma", lj.sigma);
    lj.r_core = 0.4 * lj.sigma;
    rd.positive("potential", "r_core", lj.r_core);
    c.potential = lj;
  } else {
    const auto* e = rd.entry("potential", "table");
    if (!e) throw ConfigError("<config>", 0, "potential.table is required for type = tabulated");
    c.table_path = e->value;
    std::ifstream in(c.table_path);
    if (!in) rd.fail(*e, "cannot open potential table '" + c.table_path + "'");
    Tabulated t;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double r = 0.0, v = 0.0;
      if (!(ls >> r)) continue;
      if (!(ls >> v)) throw ConfigError(c.table_path, n, "expected two columns r, V");
      t.r.push_back(r);
      t.V.push_back(v);
    }
    c.potential = t;
  }
  try {
    validate(c.potential);
    c.units.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("<config>", 0, ex.what());
  }

  const std::string bt = rd.choice("basis", "type", "lattice", {"lattice", "bessel"});
  c.basis.kind = bt == "lattice" ? BasisChoice::Kind::Lattice : BasisChoice::Kind::Bessel;
  rd.positive("basis", "a", c.basis.lattice.a);
  rd.integer("basis", "points", c.basis.lattice.points);
  rd.positive("basis", "k0", c.basis.bessel.k0);
  rd.positive("basis", "dk", c.basis.bessel.dk);
  rd.integer("basis", "nk", c.basis.bessel.nk);
  rd.positive("basis", "r_max", c.basis.bessel.r_max);
  rd.positive("basis", "reg_gamma", c.basis.bessel.reg_gamma);
  rd.positive("basis", "quad_step", c.basis.bessel.quad_step);

  rd.positive("initial", "k", c.k);
  rd.integer("initial", "L", c.L);
  if (c.L < 0) throw ConfigError("<config>", 0, "initial.L must be >= 0");
  c.basis.bessel.L = c.L;
  try {
    if (c.basis.kind == BasisChoice::Kind::Lattice) c.basis.lattice.validate();
    else c.basis.bessel.validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("<config>", 0, ex.what());
  }
  const std::string ft = rd.choice("initial", "filter", "fermi", {"fermi", "erf"});
  if (ft == "fermi") {
    FermiFilter f;
    rd.real("initial", "r0", f.r0);
    rd.positive("initial", "gamma", f.gamma);
    c.filter = f;
  } else {
    ErfFilter f;
    rd.real("initial", "r1", f.r1);
    rd.real("initial", "r2", f.r2);
    rd.positive("initial", "gamma", f.gamma);
    rd.positive("initial", "amplitude", f.amplitude);
    c.filter = f;
  }
  try {
    validate(c.filter);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("<config>", 0, ex.what());
  }

  rd.integer("detector", "n_i", c.detector.n_i);
  rd.integer("detector", "n_f", c.detector.n_f);
  if (c.detector.n_i.has_value() != c.detector.n_f.has_value())
    throw ConfigError("<config>", 0, "detector.n_i and detector.n_f must be given together");
  rd.real("detector", "r1", c.detector.r1);
  rd.positive("detector", "width", c.detector.width);
  rd.real("detector", "edge_gamma", c.detector.edge_gamma);
  rd.real("detector", "inner_limit", c.detector.guard.inner_limit);
  rd.real("detector", "wall_margin", c.detector.guard.wall_margin);

  rd.real("time", "start", c.time.start);
  rd.real("time", "stop", c.time.stop);
  rd.positive("time", "step", c.time.step);
  rd.real("time", "t", c.time.t);
  rd.integer("time", "plateau_window", c.time.plateau_window);
  rd.positive("time", "var_tol", c.time.var_tol);
  try {
    (void)c.time.grid();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("<config>", 0, ex.what());
  }
  if (c.time.plateau_window < 2) throw ConfigError("<config>", 0, "time.plateau_window must be >= 2");

  rd.integer("scan", "points", c.scan.points);
  if (c.scan.points < 5) throw ConfigError("<config>", 0, "scan.points must be >= 5");
  rd.integer("scan", "shots", c.scan.shots);
  if (c.scan.shots && *c.scan.shots < 1) throw ConfigError("<config>", 0, "scan.shots must be positive");
  rd.integer("scan", "seed", c.scan.seed);
  rd.boolean("scan", "offset", c.scan.offset);

  const std::string pm = rd.choice("propagator", "method", "auto", {"auto", "spectral", "krylov"});
  c.propagator.method = pm == "auto" ? PropagatorSpec::Method::Auto
                        : pm == "spectral" ? PropagatorSpec::Method::Spectral
                                           : PropagatorSpec::Method::Krylov;
  rd.integer("propagator", "krylov_dim", c.propagator.krylov.dim);
  rd.positive("propagator", "krylov_tol", c.propagator.krylov.tol);
  rd.integer("propagator", "spectral_max_points", c.propagator.spectral_max_points);

  rd.real("noise", "lambda", c.noise.lambda);
  if (c.noise.lambda && !(*c.noise.lambda >= 0.0 && *c.noise.lambda <= 1.0))
    throw ConfigError("<config>", 0, "noise.lambda must lie in [0, 1]");
  rd.boolean("noise", "dr", c.noise.dr);

  rd.real("oracle", "step", c.oracle.step);
  rd.real("oracle", "r_min", c.oracle.r_min);
  rd.positive("oracle", "asymptotic_tol", c.oracle.asymptotic_tol);

  c.sweep.parameter = rd.choice("sweep", "parameter", "",
                                {"", "points", "a", "gamma", "r0", "r1", "width", "fixed_volume_a"});
  c.sweep.values = rd.list("sweep", "values");

  rd.text("output", "dir", c.out_dir);
  rd.text("output", "prefix", c.prefix);
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  RawConfig raw = path.empty() ? RawConfig{} : load_ini(path);
  for (const auto& o : overrides) apply_override(raw, o);
  return resolve(raw);
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> d;
  auto add = [&](const std::string& k, const std::string& v) { d.emplace_back(k, v); };
  add("units.length_unit", c.units.length_unit);
  add("units.energy_unit", c.units.energy_unit);
  add("units.kinetic_coeff", fmt(c.units.kinetic_coeff));
  add("potential.type", c.potential_type);
  add("potential.description", teps::describe(c.potential));
  if (!c.table_path.empty()) add("potential.table", c.table_path);
  if (c.basis.kind == BasisChoice::Kind::Lattice) {
    add("basis.type", "lattice");
    add("basis.a", fmt(c.basis.lattice.a));
    add("basis.points", std::to_string(c.basis.lattice.points));
  } else {
    const auto& b = c.basis.bessel;
    add("basis.type", "bessel");
    add("basis.k0", fmt(b.k0));
    add("basis.dk", fmt(b.dk));
    add("basis.nk", std::to_string(b.nk));
    add("basis.r_max", fmt(b.r_max));
    add("basis.reg_gamma", fmt(b.reg_gamma));
    add("basis.quad_step", fmt(b.quad_step));
  }
  add("initial.k", fmt(c.k));
  add("initial.L", std::to_string(c.L));
  if (const auto* f = std::get_if<FermiFilter>(&c.filter)) {
    add("initial.filter", "fermi");
    add("initial.r0", fmt(f->r0));
    add("initial.gamma", fmt(f->gamma));
  } else {
    const auto& e = std::get<ErfFilter>(c.filter);
    add("initial.filter", "erf");
    add("initial.r1", fmt(e.r1));
    add("initial.r2", fmt(e.r2));
    add("initial.gamma", fmt(e.gamma));
    add("initial.amplitude", fmt(e.amplitude));
  }
  if (c.detector.n_i) {
    add("detector.n_i", std::to_string(*c.detector.n_i));
    add("detector.n_f", std::to_string(*c.detector.n_f));
  } else {
    add("detector.r1", fmt(c.detector.r1));
    add("detector.width", fmt(c.detector.width));
  }
  add("detector.edge_gamma", fmt(c.detector.edge_gamma));
  add("detector.inner_limit", fmt(c.detector.guard.inner_limit));
  add("detector.wall_margin", fmt(c.detector.guard.wall_margin));
  add("time.start", fmt(c.time.start));
  add("time.stop", fmt(c.time.stop));
  add("time.step", fmt(c.time.step));
  if (c.time.t) add("time.t", fmt(*c.time.t));
  add("time.plateau_window", std::to_string(c.time.plateau_window));
  add("time.var_tol", fmt(c.time.var_tol));
  add("scan.points", std::to_string(c.scan.points));
  add("scan.shots", c.scan.shots ? std::to_string(*c.scan.shots) : "exact");
  add("scan.seed", std::to_string(c.scan.seed));
  add("scan.offset", c.scan.offset ? "true" : "false");
  const char* m = c.propagator.method == PropagatorSpec::Method::Auto       ? "auto"
                  : c.propagator.method == PropagatorSpec::Method::Spectral ? "spectral"
                                                                            : "krylov";
  add("propagator.method", m);
  add("propagator.krylov_dim", std::to_string(c.propagator.krylov.dim));
  add("propagator.krylov_tol", fmt(c.propagator.krylov.tol));
  add("propagator.spectral_max_points", std::to_string(c.propagator.spectral_max_points));
  add("noise.lambda", c.noise.lambda ? fmt(*c.noise.lambda) : "none");
  add("noise.dr", c.noise.dr ? "true" : "false");
  add("oracle.step", fmt(c.oracle.step));
  add("oracle.r_min", fmt(c.oracle.r_min));
  add("oracle.asymptotic_tol", fmt(c.oracle.asymptotic_tol));
  if (!c.sweep.parameter.empty()) {
    add("sweep.parameter", c.sweep.parameter);
    std::string v;
    for (double x : c.sweep.values) v += (v.empty() ? "" : ",") + fmt(x);
    add("sweep.values", v);
  }
  add("output.dir", c.out_dir);
  add("output.prefix", c.prefix);
  return d;
}

Basis make_basis(const BasisChoice& choice) {
  if (choice.kind == BasisChoice::Kind::Lattice) return choice.lattice;
  return make_bessel_basis(choice.bessel);
}

}  // namespace teps
