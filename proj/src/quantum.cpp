#include "qrc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qrc/kernels.hpp"

namespace qrc::quantum {

std::string to_string(Entangler e) {
  switch (e) {
    case Entangler::RingCnot: return "ring_cnot";
    case Entangler::LineCnot: return "line_cnot";
    case Entangler::AllToAllCz: return "all_to_all_cz";
  }
  return "unknown";
}

Entangler entangler_from_string(const std::string& s) {
  if (s == "ring_cnot") return Entangler::RingCnot;
  if (s == "line_cnot") return Entangler::LineCnot;
  if (s == "all_to_all_cz") return Entangler::AllToAllCz;
  throw std::invalid_argument("unknown entangler: " + s);
}

Statevector::Statevector(int qubits) : qubits_(qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range [1, 14]");
  }
  amps_.assign(std::size_t{1} << qubits, {0.0, 0.0});
  amps_[0] = {1.0, 0.0};
}

void Statevector::apply_2x2(int qubit, const std::complex<double>* m) {
  kernels::active().apply_gate_2x2(amps_.data(), amps_.size(), static_cast<unsigned>(qubit), m);
}

void Statevector::apply_rx(int qubit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::complex<double> m[4] = {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
  apply_2x2(qubit, m);
}

void Statevector::apply_ry(int qubit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::complex<double> m[4] = {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
  apply_2x2(qubit, m);
}

void Statevector::apply_rz(int qubit, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::complex<double> m[4] = {{c, -s}, {0.0, 0.0}, {0.0, 0.0}, {c, s}};
  apply_2x2(qubit, m);
}

void Statevector::apply_hadamard(int qubit) {
  const double h = std::numbers::sqrt2 / 2.0;
  const std::complex<double> m[4] = {{h, 0.0}, {h, 0.0}, {h, 0.0}, {-h, 0.0}};
  apply_2x2(qubit, m);
}

void Statevector::apply_hadamard_all() {
  for (int q = 0; q < qubits_; ++q) apply_hadamard(q);
}

void Statevector::apply_cnot(int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cbit) != 0 && (i & tbit) == 0) std::swap(amps_[i], amps_[i | tbit]);
  }
}

void Statevector::apply_cz(int a, int b) {
  const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == mask) amps_[i] = -amps_[i];
  }
}

double Statevector::norm() const {
  double acc = 0.0;
  for (const auto& a : amps_) acc += a.real() * a.real() + a.imag() * a.imag();
  return std::sqrt(acc);
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> probs(amps_.size());
  kernels::active().abs2(probs.data(), amps_.data(), amps_.size());
  return probs;
}

ReservoirParams build_reservoir(std::uint64_t seed, int qubits, int depth, Entangler entangler) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range [1, 14]");
  }
  if (depth < 1) throw std::invalid_argument("depth must be positive");

  ReservoirParams p;
  p.qubits = qubits;
  p.depth = depth;
  p.entangler = entangler;
  p.reservoir_seed = seed;

  rng::Xoshiro256 gen(seed);
  constexpr double pi = std::numbers::pi;
  p.input_weights.resize(qubits);
  for (auto& w : p.input_weights) w = gen.uniform(-pi, pi);
  p.rotation_angles.resize(static_cast<std::size_t>(depth) * qubits * 3);
  for (auto& a : p.rotation_angles) a = gen.uniform(0.0, 2.0 * pi);
  return p;
}

namespace {

void apply_entangler(Statevector& state, const ReservoirParams& p) {
  const int q = p.qubits;
  if (q < 2) return;
  switch (p.entangler) {
    case Entangler::RingCnot:
      for (int i = 0; i < q; ++i) state.apply_cnot(i, (i + 1) % q);
      break;
    case Entangler::LineCnot:
      for (int i = 0; i + 1 < q; ++i) state.apply_cnot(i, i + 1);
      break;
    case Entangler::AllToAllCz:
      for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < q; ++j) state.apply_cz(i, j);
      }
      break;
  }
}

}  // namespace

Statevector apply_circuit(const ReservoirParams& params, double input) {
  Statevector state(params.qubits);
  for (int i = 0; i < params.qubits; ++i) {
    state.apply_ry(i, params.input_weights[i] * input);
  }
  for (int layer = 0; layer < params.depth; ++layer) {
    for (int i = 0; i < params.qubits; ++i) {
      state.apply_rx(i, params.angle(layer, i, 0));
      state.apply_ry(i, params.angle(layer, i, 1));
      state.apply_rz(i, params.angle(layer, i, 2));
    }
    apply_entangler(state, params);
  }
  return state;
}

std::vector<std::int8_t> sample_bitstrings(const Statevector& state, Basis basis, int n,
                                           rng::Xoshiro256& gen) {
  if (n < 1) throw std::invalid_argument("sample count must be positive");

  std::vector<double> probs;
  if (basis == Basis::X) {
    Statevector rotated = state;
    rotated.apply_hadamard_all();
    probs = rotated.probabilities();
  } else {
    probs = state.probabilities();
  }

  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }

  const int q = state.qubits();
  std::vector<std::int8_t> out(static_cast<std::size_t>(n) * q);
  for (int s = 0; s < n; ++s) {
    const double u = gen.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    for (int b = 0; b < q; ++b) {
      out[static_cast<std::size_t>(s) * q + b] = ((idx >> b) & 1) ? -1 : 1;
    }
  }
  return out;
}

ShotRecord run_sequence(const ReservoirParams& params, const std::vector<double>& inputs,
                        int n_shots, std::uint64_t sampling_seed) {
  if (inputs.empty()) throw std::invalid_argument("input sequence is empty");
  if (n_shots < 1) throw std::invalid_argument("n_shots must be positive");

  ShotRecord rec;
  rec.meta.qubits = params.qubits;
  rec.meta.n_shots = n_shots;
  rec.meta.timesteps = static_cast<int>(inputs.size());
  rec.meta.reservoir_seed = params.reservoir_seed;
  rec.meta.sampling_seed = sampling_seed;
  const int q = params.qubits;
  rec.outcomes.resize(inputs.size() * static_cast<std::size_t>(n_shots) * 2 * q);

  for (std::size_t t = 0; t < inputs.size(); ++t) {
    const Statevector state = apply_circuit(params, inputs[t]);
    rng::Xoshiro256 z_gen(rng::derive_stream(sampling_seed, 2 * t));
    rng::Xoshiro256 x_gen(rng::derive_stream(sampling_seed, 2 * t + 1));
    const auto z_samples = sample_bitstrings(state, Basis::Z, n_shots, z_gen);
    const auto x_samples = sample_bitstrings(state, Basis::X, n_shots, x_gen);
    for (int n = 0; n < n_shots; ++n) {
      std::int8_t* row = rec.row(static_cast<int>(t), n);
      for (int b = 0; b < q; ++b) {
        row[b] = z_samples[static_cast<std::size_t>(n) * q + b];
        row[q + b] = x_samples[static_cast<std::size_t>(n) * q + b];
      }
    }
    rec.meta.executions += 2ull * n_shots;
  }
  return rec;
}

std::uint64_t ShotRecord::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(meta.qubits));
  mix(static_cast<std::uint64_t>(meta.n_shots));
  mix(static_cast<std::uint64_t>(meta.timesteps));
  mix(meta.reservoir_seed);
  mix(meta.sampling_seed);
  for (const std::int8_t b : outcomes) {
    h ^= static_cast<std::uint8_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace qrc::quantum
