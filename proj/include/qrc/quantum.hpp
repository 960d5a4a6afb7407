#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qrc/rng.hpp"

namespace qrc::quantum {

enum class Entangler { RingCnot, LineCnot, AllToAllCz };

std::string to_string(Entangler e);
Entangler entangler_from_string(const std::string& s);

constexpr int kMaxQubits = 14;

/// Fixed random reservoir: input-encoding weights plus per-layer rotation
/// angles, all drawn from a dedicated stream keyed by reservoir_seed.
struct ReservoirParams {
  int qubits = 4;
  int depth = 1;
  Entangler entangler = Entangler::RingCnot;
  std::vector<double> input_weights;    // Q values in [-pi, pi]
  std::vector<double> rotation_angles;  // D*Q*3 values in [0, 2pi], [layer][qubit][x,y,z]
  std::uint64_t reservoir_seed = 0;

  double angle(int layer, int qubit, int axis) const {
    return rotation_angles[(static_cast<std::size_t>(layer) * qubits + qubit) * 3 + axis];
  }
};

/// Dense statevector over up to kMaxQubits qubits. Qubit i is bit i of the
/// basis-state index (qubit 0 least significant).
class Statevector {
 public:
  explicit Statevector(int qubits);

  int qubits() const { return qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::complex<double>* data() { return amps_.data(); }
  const std::complex<double>* data() const { return amps_.data(); }
  std::complex<double> amplitude(std::size_t i) const { return amps_[i]; }

  void apply_rx(int qubit, double theta);
  void apply_ry(int qubit, double theta);
  void apply_rz(int qubit, double theta);
  void apply_hadamard(int qubit);
  void apply_hadamard_all();
  void apply_cnot(int control, int target);
  void apply_cz(int a, int b);

  double norm() const;
  /// |amplitude|^2 per basis state.
  std::vector<double> probabilities() const;

 private:
  void apply_2x2(int qubit, const std::complex<double>* m);

  std::vector<std::complex<double>> amps_;
  int qubits_;
};

enum class Basis { Z, X };

struct ShotRecordMeta {
  int qubits = 0;
  int n_shots = 0;
  int timesteps = 0;
  std::uint64_t reservoir_seed = 0;
  std::uint64_t sampling_seed = 0;
  std::uint64_t series_seed = 0;  // provenance of the driving series; 0 = unknown
  std::string task;
  std::uint64_t executions = 0;  // circuit executions consumed producing the record
};

/// T x N_shots x 2Q tensor of +-1 outcomes; per row the first Q entries are
/// the Z-basis bits, the last Q the X-basis bits, paired by shot index.
struct ShotRecord {
  ShotRecordMeta meta;
  std::vector<std::int8_t> outcomes;

  int cols() const { return 2 * meta.qubits; }
  std::int8_t* row(int t, int n) {
    return outcomes.data() + (static_cast<std::size_t>(t) * meta.n_shots + n) * cols();
  }
  const std::int8_t* row(int t, int n) const {
    return outcomes.data() + (static_cast<std::size_t>(t) * meta.n_shots + n) * cols();
  }

  /// FNV-1a over dimensions, seeds, and outcome bytes; used by the harness
  /// to assert that compared protocols consumed the identical record.
  std::uint64_t hash() const;
};

ReservoirParams build_reservoir(std::uint64_t seed, int qubits, int depth, Entangler entangler);

/// Prepares the reservoir state for one input: reset to |0...0>, encode the
/// input with Ry(w_i * u) on every qubit, then apply `depth` layers of
/// Rx/Ry/Rz rotations followed by the entangler.
Statevector apply_circuit(const ReservoirParams& params, double input);

/// n x Q row-major array of +-1 samples. Basis::X measures after a Hadamard
/// on every qubit. Bit 0 maps to +1, bit 1 to -1.
std::vector<std::int8_t> sample_bitstrings(const Statevector& state, Basis basis, int n,
                                           rng::Xoshiro256& gen);

/// Runs the reset-based sequence: one circuit per time step, n_shots samples
/// in each basis, sampling streams keyed per (time step, basis) so records
/// are reproducible and order-independent.
ShotRecord run_sequence(const ReservoirParams& params, const std::vector<double>& inputs,
                        int n_shots, std::uint64_t sampling_seed);

}  // namespace qrc::quantum
