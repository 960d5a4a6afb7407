#include "qrc/features.hpp"

#include <cstring>
#include <stdexcept>

#include "qrc/kernels.hpp"

namespace qrc::features {

std::vector<double> leaky_update(const std::vector<double>& prev_trace,
                                 const std::vector<std::int8_t>& measurement, double eta) {
  if (prev_trace.size() != measurement.size()) {
    throw std::invalid_argument("trace/measurement dimension mismatch");
  }
  std::vector<double> out = prev_trace;
  kernels::active().leaky_blend_i8(out.data(), measurement.data(), eta, out.size());
  return out;
}

FeatureTensor build_features(const quantum::ShotRecord& record, const FeatureParams& params) {
  if (record.meta.timesteps <= 0 || record.meta.n_shots <= 0) {
    throw std::invalid_argument("empty shot record");
  }
  if (!(params.leak > 0.0 && params.leak <= 1.0)) {
    throw std::invalid_argument("leak must be in (0, 1]");
  }
  if (params.window < 1) throw std::invalid_argument("window must be positive");

  const int t_steps = record.meta.timesteps;
  const int n_shots = record.meta.n_shots;
  const int c = record.cols();  // 2Q, trace width per shot
  const int window = params.window;

  FeatureTensor out;
  out.timesteps = t_steps;
  out.n_shots = n_shots;
  out.dim = c * window;
  out.qubits = record.meta.qubits;
  out.params = params;
  out.values.resize(static_cast<std::size_t>(t_steps) * n_shots * out.dim);

  const std::size_t slab = static_cast<std::size_t>(n_shots) * c;
  // Trace ring: the last `window` trace slabs, each [n][2Q] contiguous.
  std::vector<std::vector<double>> ring(window, std::vector<double>(slab, 0.0));
  std::vector<double> current(slab, 0.0);
  const std::vector<double> zeros(c, 0.0);

  const auto& ops = kernels::active();
  for (int t = 0; t < t_steps; ++t) {
    ops.leaky_blend_i8(current.data(), record.row(t, 0), params.leak, slab);
    ring[t % window] = current;
    for (int n = 0; n < n_shots; ++n) {
      double* dst = out.feature(t, n);
      for (int l = 0; l < window; ++l) {
        const double* src =
            (t - l >= 0) ? ring[(t - l) % window].data() + static_cast<std::size_t>(n) * c
                         : zeros.data();
        std::memcpy(dst + static_cast<std::size_t>(l) * c, src, sizeof(double) * c);
      }
    }
  }
  return out;
}

}  // namespace qrc::features
