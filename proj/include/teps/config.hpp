#pragma once

#include "teps/basis.hpp"
#include "teps/numerov.hpp"
#include "teps/propagate.hpp"
#include "teps/units.hpp"
#include "teps/waves.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teps {

// Carries "<source>:<line>: message" so errors point at the offending line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& msg);
  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

struct RawEntry {
  std::string value;
  std::string source;
  int line = 0;
};

// section -> key -> entry, after syntax and schema checks.
struct RawConfig {
  std::map<std::string, std::map<std::string, RawEntry>> sections;

  const RawEntry* find(const std::string& section, const std::string& key) const;
};

// Syntax: "[section]" headers, "key = value" lines, '#' or ';' comments. Unknown sections or keys
// and duplicates are rejected.
RawConfig parse_ini(const std::string& text, const std::string& source = "<config>");
RawConfig load_ini(const std::string& path);
// "section.key=value"; the override wins over the file.
void apply_override(RawConfig& raw, const std::string& assignment, const std::string& source = "--set");

// All accepted section.key names in schema order.
const std::vector<std::pair<std::string, std::vector<std::string>>>& config_schema();

struct BasisChoice {
  enum class Kind { Lattice, Bessel };
  Kind kind = Kind::Lattice;
  LatticeBasis lattice;
  BesselParams bessel;
};

struct DetectorConfig {
  std::optional<int> n_i;
  std::optional<int> n_f;
  double r1 = 16.44;
  double width = 23.02;
  double edge_gamma = 0.0;
  DetectorGuard guard;
};

struct TimeConfig {
  double start = 0.0;
  double stop = 60.0;
  double step = 0.5;
  std::optional<double> t;  // single evaluation time (vteps/emulate second step)
  int plateau_window = 9;
  double var_tol = 0.02 * 0.02;

  std::vector<double> grid() const;
};

struct ScanConfig {
  int points = 100;
  std::optional<long> shots;
  std::uint64_t seed = 1;
  bool offset = false;
};

struct NoiseConfig {
  std::optional<double> lambda;
  bool dr = false;
};

struct SweepConfig {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  UnitSystem units;
  PotentialSpec potential = Gaussian{};
  std::string potential_type = "gaussian";
  std::string table_path;
  BasisChoice basis;
  double k = 1.73;
  int L = 0;
  FilterSpec filter = FermiFilter{};
  DetectorConfig detector;
  TimeConfig time;
  ScanConfig scan;
  PropagatorSpec propagator;
  NoiseConfig noise;
  OracleOptions oracle;
  SweepConfig sweep;
  std::string out_dir = ".";
  std::string prefix = "run";
};

RunConfig resolve(const RawConfig& raw);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Fully resolved configuration as section.key = value pairs, defaults included.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& cfg);

Basis make_basis(const BasisChoice& choice);

}  // namespace teps
