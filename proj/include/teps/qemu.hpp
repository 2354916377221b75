#pragma once

#include "teps/basis.hpp"
#include "teps/phaseshift.hpp"
#include "teps/waves.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace teps::qemu {

// Qubit 0 is the most significant bit of a basis-state index.
struct Gate {
  enum class Kind { Ry, Rz, U3, CNOT, CZ, DiagonalPhase };
  Kind kind = Kind::Ry;
  std::vector<int> qubits;     // CNOT/CZ: {control, target}
  std::vector<double> angles;  // Ry/Rz: {theta}; U3: {theta, phi, lambda}; DiagonalPhase: one phase per basis state
};

struct Circuit {
  int n = 1;
  std::vector<Gate> gates;

  void validate() const;
  std::size_t count(Gate::Kind k) const;
};

using StateVector = Eigen::VectorXcd;

StateVector zero_state(int n);
StateVector apply_circuit(const Circuit& c, StateVector s);

Gate ry(int q, double theta);
Gate rz(int q, double theta);
Gate u3(int q, double theta, double phi, double lambda);
Gate cnot(int control, int target);
Gate cz(int control, int target);
Gate diagonal_phase(int n, std::vector<double> phases);

// Uniformly controlled Ry cascade with Gray-code multiplexors preparing a real target from |0..0>.
// odd_L appends a global factor i, the phase carried by odd partial waves.
Circuit graycode_real_prep(const Eigen::VectorXd& target, int n, bool odd_L = false);
Circuit inverse_circuit(const Circuit& c);
// exp(-i E_j t) on basis state j; energies shorter than 2^n are padded with 0.
Circuit diagonal_evolution(const Eigen::VectorXd& energies, double t, int n);
Circuit concat(const Circuit& a, const Circuit& b);

struct NoiseModel {
  double lambda = 1.0;  // survival probability of a global depolarizing channel
  void validate() const;
};

double depolarize(double p, const NoiseModel& noise, int n);

double measure_all_zero_prob(const StateVector& s, std::optional<long> shots = std::nullopt,
                             std::optional<NoiseModel> noise = std::nullopt, std::uint64_t seed = 0);
double measure_all_zero_prob(const StateVector& s, std::optional<long> shots, std::optional<NoiseModel> noise,
                             std::mt19937_64& rng);

struct DRInputs {
  double P_phys_noisy = 0.0;
  double P_id_noisy = 0.0;
  double P_id_ex = 1.0;
  int n = 4;
};
struct DRResult {
  double P = 0.0;
  bool clamped = false;
};
DRResult decoherence_renormalize(const DRInputs& in);

std::string serialize(const Circuit& c);
Circuit parse_circuit(const std::string& text);

// Hamiltonian eigenstates mapped onto computational states in ascending-energy order.
struct EmulatorModel {
  int n = 4;
  Eigen::VectorXd energies;  // length 2^n, padded with zeros
  Eigen::VectorXd initial;   // eigenbasis amplitudes of the initial state, length 2^n
  SpectralDecomposition decomposition;
};

// Real eigenbasis amplitudes of a state (throws if the state is not real in that basis).
Eigen::VectorXd eigen_amplitudes(const SpectralDecomposition& d, const WaveState& s, int n);
EmulatorModel make_emulator_model(const SpectralDecomposition& d, const WaveState& initial);

// prep(initial) -> diagonal evolution -> inverse prep(detector), then the all-zero probability.
Circuit overlap_circuit(const EmulatorModel& m, const Eigen::VectorXd& detector_amplitudes, double t);
double emulate_overlap(const EmulatorModel& m, const Eigen::VectorXd& detector_amplitudes, double t,
                       std::optional<long> shots, std::optional<NoiseModel> noise, std::mt19937_64& rng);

// Reference circuit for decoherence renormalization: prep followed by its inverse (ideal P = 1).
double emulate_identity_reference(const EmulatorModel& m, std::optional<long> shots, std::optional<NoiseModel> noise,
                                  std::mt19937_64& rng);

ScanResult run_vteps_on_emulator(const EmulatorModel& m, const std::vector<Eigen::VectorXd>& detectors,
                                 const std::vector<double>& grid, double t, std::optional<long> shots,
                                 std::optional<NoiseModel> noise, std::uint64_t seed);

}  // namespace teps::qemu
