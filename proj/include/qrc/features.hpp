#pragma once

#include <cstdint>
#include <vector>

#include "qrc/quantum.hpp"

namespace qrc::features {

struct FeatureParams {
  double leak = 0.2;  // eta in (0, 1]
  int window = 10;    // tapped-delay length L
};

/// T x N_shots x d tensor of per-shot readout features, d = 2*Q*L. Entry
/// (t, n) concatenates the L most recent leaky traces of shot stream n,
/// zero-padded before step L-1.
struct FeatureTensor {
  std::vector<double> values;
  int timesteps = 0;
  int n_shots = 0;
  int dim = 0;     // 2*Q*window
  int qubits = 0;
  FeatureParams params{};

  const double* feature(int t, int n) const {
    return values.data() + (static_cast<std::size_t>(t) * n_shots + n) * dim;
  }
  double* feature(int t, int n) {
    return values.data() + (static_cast<std::size_t>(t) * n_shots + n) * dim;
  }
};

/// One leaky-integration step: (1 - eta) * prev + eta * measurement.
/// Exposed for direct testing; build_features runs the same kernel over
/// whole shot slabs.
std::vector<double> leaky_update(const std::vector<double>& prev_trace,
                                 const std::vector<std::int8_t>& measurement, double eta);

FeatureTensor build_features(const quantum::ShotRecord& record, const FeatureParams& params);

}  // namespace qrc::features
