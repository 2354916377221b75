#pragma once

#include "teps/config.hpp"
#include "teps/phaseshift.hpp"
#include "teps/qemu.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace teps {

std::string software_version();

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// '#'-prefixed "key = value" metadata lines, then a header row and %.17g data.
void write_csv(const std::string& path, const Metadata& meta, const CsvTable& table);
std::string format_csv(const Metadata& meta, const CsvTable& table);

// Everything a run needs before time evolution.
struct PreparedRun {
  Basis basis;
  HamiltonianMatrix H;
  double k_in = 0.0;
  int n_i = 0;
  int n_f = 0;
  WaveState initial;
  DetectorSpec detector;  // delta_V = 0
  WaveState detector_state;
  NormalizationSet norms;
};

PreparedRun prepare_run(const RunConfig& cfg);

struct TepsOutcome {
  double k_in = 0.0;
  int n_i = 0;
  int n_f = 0;
  NormalizationSet norms;
  double tau = 0.0;
  PhaseSeries series;
  std::optional<MeanStd> value;
  double exact = 0.0;
  std::size_t clamped = 0;
};

TepsOutcome run_teps(const RunConfig& cfg);

struct VtepsOutcome {
  double k_in = 0.0;
  int n_i = 0;
  int n_f = 0;
  double tau = 0.0;
  std::vector<double> times;
  std::vector<ScanResult> scans;
  std::vector<FitResult> fits;
  std::vector<double> delta_star;  // fit maximizer per time (NaN when degenerate)
  std::optional<Interval> plateau;
  std::optional<MeanStd> value;
  double exact = 0.0;
};

// With time.t set the scan runs at that single time; otherwise at every grid time, and the
// maximizers are averaged over their plateau.
VtepsOutcome run_vteps(const RunConfig& cfg);

struct OracleOutcome {
  double k = 0.0;
  double energy = 0.0;
  double delta = 0.0;
};
OracleOutcome run_oracle(const RunConfig& cfg);

RunConfig with_sweep_value(const RunConfig& cfg, const std::string& parameter, double value);

struct SweepRow {
  double value = 0.0;
  TepsOutcome outcome;
};
std::vector<SweepRow> run_sweep(const RunConfig& cfg);

struct EmulateOutcome {
  int qubits = 0;
  double k_in = 0.0;
  std::optional<double> lambda;
  std::vector<double> times;
  std::vector<double> P_classical;
  std::vector<double> P_ideal;  // noiseless emulator, exact probabilities
  std::vector<double> P_noisy;  // empty without a noise model
  std::vector<double> P_dr;
  double max_abs_diff = 0.0;  // emulator vs classical, time scan and delta_V scan
  std::optional<Interval> plateau;
  double t_scan = 0.0;
  ScanResult scan_classical;
  ScanResult scan_ideal;
  ScanResult scan_noisy;
  ScanResult scan_dr;
  FitResult fit_ideal;
  std::optional<FitResult> fit_noisy;  // with offset (f1)
  std::optional<FitResult> fit_dr;     // without offset (f2)
  double exact = 0.0;
  std::string circuit;  // overlap circuit at t_scan, delta_V = 0, as a gate list
};
EmulateOutcome run_emulate(const RunConfig& cfg);

// Emit CSV files for a finished run; returns the written paths.
std::vector<std::string> write_teps(const RunConfig& cfg, const TepsOutcome& o);
std::vector<std::string> write_vteps(const RunConfig& cfg, const VtepsOutcome& o);
std::vector<std::string> write_oracle(const RunConfig& cfg, const OracleOutcome& o);
std::vector<std::string> write_sweep(const RunConfig& cfg, const std::vector<SweepRow>& rows);
std::vector<std::string> write_emulate(const RunConfig& cfg, const EmulateOutcome& o);

}  // namespace teps
