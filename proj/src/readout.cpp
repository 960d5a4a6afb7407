#include "qrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <stdexcept>

#include "qrc/kernels.hpp"

namespace qrc::readout {

Standardizer fit_standardizer(const Matrix& x) {
  if (x.rows == 0) throw std::invalid_argument("cannot fit standardizer on empty matrix");
  const std::size_t d = x.cols;
  const auto& ops = kernels::active();

  Standardizer s;
  s.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) ops.add_rows(s.mean.data(), x.row(r), d);
  ops.scale(s.mean.data(), 1.0 / static_cast<double>(x.rows), d);

  std::vector<double> sq(d, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) ops.accum_sq_diff(sq.data(), x.row(r), s.mean.data(), d);
  s.inv_std.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(sq[j] / static_cast<double>(x.rows));
    s.inv_std[j] = 1.0 / std::max(sd, Standardizer::kStdFloor);
  }
  return s;
}

Matrix apply_standardizer(const Standardizer& s, const Matrix& x) {
  if (s.mean.size() != x.cols) throw std::invalid_argument("standardizer dimension mismatch");
  Matrix out(x.rows, x.cols);
  const auto& ops = kernels::active();
  for (std::size_t r = 0; r < x.rows; ++r) {
    ops.standardize(out.row(r), x.row(r), s.mean.data(), s.inv_std.data(), x.cols);
  }
  return out;
}

namespace {

// In-place Cholesky solve of the symmetric positive-definite system a*w = b.
// `a` holds the full d x d matrix (upper triangle filled by the caller and
// mirrored here). Returns false when a pivot collapses.
bool cholesky_solve(Matrix& a, std::vector<double>& b) {
  const std::size_t d = a.cols;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) a(j, i) = a(i, j);
  }
  for (std::size_t j = 0; j < d; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double root = std::sqrt(diag);
    a(j, j) = root;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
      a(i, j) = v / root;
    }
  }
  // Forward then backward substitution.
  for (std::size_t i = 0; i < d; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a(i, k) * b[k];
    b[i] = v / a(i, i);
  }
  for (std::size_t ii = d; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < d; ++k) v -= a(k, ii) * b[k];
    b[ii] = v / a(ii, ii);
  }
  return true;
}

RidgeModel fit_impl(const Matrix& x, const std::vector<double>& y, double lambda, double gamma,
                    const std::vector<double>& noise_var) {
  if (x.rows == 0) throw std::invalid_argument("cannot fit on empty design");
  if (x.rows != y.size()) throw std::invalid_argument("design/target size mismatch");
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("penalties must be nonnegative");

  const std::size_t d = x.cols;
  const auto& ops = kernels::active();

  double offset = 0.0;
  for (const double v : y) offset += v;
  offset /= static_cast<double>(y.size());

  Matrix gram(d, d);
  std::vector<double> rhs(d, 0.0);
  for (std::size_t r = 0; r < x.rows; ++r) {
    ops.gram_rank1_upper(gram.data.data(), x.row(r), d);
    ops.axpy(rhs.data(), y[r] - offset, x.row(r), d);
  }
  for (std::size_t j = 0; j < d; ++j) {
    gram(j, j) += lambda;
    if (gamma > 0.0) gram(j, j) += gamma * noise_var[j];
  }

  if (!cholesky_solve(gram, rhs)) {
    if (lambda == 0.0) {
      throw std::invalid_argument("singular normal equations; use lambda > 0");
    }
    throw std::runtime_error("ridge system not positive definite");
  }

  RidgeModel m;
  m.weights = std::move(rhs);
  m.offset = offset;
  m.lambda = lambda;
  m.gamma = gamma;
  if (gamma > 0.0) m.noise_var = noise_var;
  return m;
}

}  // namespace

RidgeModel ridge_fit(const Matrix& x, const std::vector<double>& y, double lambda) {
  return fit_impl(x, y, lambda, 0.0, {});
}

RidgeModel noise_aware_fit(const Matrix& x, const std::vector<double>& y, double lambda,
                           double gamma, const std::vector<double>& noise_var) {
  if (gamma > 0.0 && noise_var.size() != x.cols) {
    throw std::invalid_argument("noise variance dimension mismatch");
  }
  return fit_impl(x, y, lambda, gamma, noise_var);
}

std::vector<double> estimate_feature_noise_var(const features::FeatureTensor& feats,
                                               const std::vector<int>& block, int k) {
  if (feats.n_shots < 2) throw std::invalid_argument("need at least 2 shots");
  if (k < 1) throw std::invalid_argument("group size must be positive");
  if (block.empty()) throw std::invalid_argument("empty block");

  const int d = feats.dim;
  const int n = feats.n_shots;
  const auto& ops = kernels::active();

  std::vector<double> mean(d);
  std::vector<double> acc(d, 0.0);
  for (const int t : block) {
    std::memset(mean.data(), 0, sizeof(double) * d);
    for (int s = 0; s < n; ++s) ops.add_rows(mean.data(), feats.feature(t, s), d);
    ops.scale(mean.data(), 1.0 / n, d);
    for (int s = 0; s < n; ++s) ops.accum_sq_diff(acc.data(), feats.feature(t, s), mean.data(), d);
  }
  const double denom = static_cast<double>(block.size()) * (n - 1) * k;
  for (auto& v : acc) v /= denom;
  return acc;
}

std::vector<double> noise_var_to_standardized(const std::vector<double>& noise_var,
                                              const Standardizer& s) {
  if (noise_var.size() != s.inv_std.size()) {
    throw std::invalid_argument("noise variance dimension mismatch");
  }
  std::vector<double> out(noise_var.size());
  for (std::size_t j = 0; j < noise_var.size(); ++j) {
    out[j] = noise_var[j] * s.inv_std[j] * s.inv_std[j];
  }
  return out;
}

std::vector<double> predict(const RidgeModel& model, const Matrix& x) {
  if (model.weights.size() != x.cols) throw std::invalid_argument("model dimension mismatch");
  std::vector<double> out(x.rows);
  const auto& ops = kernels::active();
  for (std::size_t r = 0; r < x.rows; ++r) {
    out[r] = ops.dot(x.row(r), model.weights.data(), x.cols) + model.offset;
  }
  return out;
}

StepPredictions aggregate_predictions(const std::vector<double>& row_predictions,
                                      const std::vector<int>& timestep) {
  if (row_predictions.size() != timestep.size()) {
    throw std::invalid_argument("prediction/index size mismatch");
  }
  std::map<int, std::pair<double, int>> acc;
  for (std::size_t r = 0; r < row_predictions.size(); ++r) {
    auto& slot = acc[timestep[r]];
    slot.first += row_predictions[r];
    slot.second += 1;
  }
  StepPredictions out;
  out.steps.reserve(acc.size());
  out.values.reserve(acc.size());
  for (const auto& [step, sum_count] : acc) {
    out.steps.push_back(step);
    out.values.push_back(sum_count.first / sum_count.second);
  }
  return out;
}

double nrmse(const std::vector<double>& y_true, const std::vector<double>& y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("size mismatch");
  if (y_true.size() < 2) throw std::invalid_argument("need at least 2 test points");
  const double n = static_cast<double>(y_true.size());

  double mean = 0.0;
  for (const double v : y_true) mean += v;
  mean /= n;

  double var = 0.0;
  for (const double v : y_true) var += (v - mean) * (v - mean);
  var /= n;
  if (!(var > 0.0)) throw std::invalid_argument("test targets have zero variance");

  double mse = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double e = y_pred[i] - y_true[i];
    mse += e * e;
  }
  mse /= n;
  return std::sqrt(mse) / std::sqrt(var);
}

}  // namespace qrc::readout
