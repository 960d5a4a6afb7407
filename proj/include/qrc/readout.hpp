#pragma once

#include <vector>

#include "qrc/features.hpp"
#include "qrc/matrix.hpp"

namespace qrc::readout {

/// Column-wise z-score transform fitted on the current training block only.
/// Stored deviations are population (divide by n) and floored at kStdFloor
/// so constant columns map to zero.
struct Standardizer {
  static constexpr double kStdFloor = 1e-8;
  std::vector<double> mean;
  std::vector<double> inv_std;  // 1 / max(std, kStdFloor)
};

Standardizer fit_standardizer(const Matrix& x);
Matrix apply_standardizer(const Standardizer& s, const Matrix& x);

struct RidgeModel {
  std::vector<double> weights;
  double offset = 0.0;  // training-target mean, added back at prediction
  double lambda = 0.0;
  double gamma = 0.0;
  std::vector<double> noise_var;  // per-feature shot-noise variances when gamma > 0
};

/// Solves (X^T X + lambda I) w = X^T (y - mean(y)) by Cholesky on the
/// penalized Gram matrix. X must already be standardized.
RidgeModel ridge_fit(const Matrix& x, const std::vector<double>& y, double lambda);

/// Ridge with an extra diagonal penalty gamma * diag(noise_var).
RidgeModel noise_aware_fit(const Matrix& x, const std::vector<double>& y, double lambda,
                           double gamma, const std::vector<double>& noise_var);

/// Per-feature within-step shot variance averaged over the block, divided
/// by the group size k (group means have 1/k of the shot-level variance).
/// Computed on raw features; rescale with noise_var_to_standardized before
/// passing to noise_aware_fit on standardized designs.
std::vector<double> estimate_feature_noise_var(const features::FeatureTensor& feats,
                                               const std::vector<int>& block, int k);

std::vector<double> noise_var_to_standardized(const std::vector<double>& noise_var,
                                              const Standardizer& s);

std::vector<double> predict(const RidgeModel& model, const Matrix& x);

struct StepPredictions {
  std::vector<int> steps;     // ascending labeled time steps
  std::vector<double> values;  // mean prediction per step
};

/// Averages row predictions sharing a time step back to one prediction.
StepPredictions aggregate_predictions(const std::vector<double>& row_predictions,
                                      const std::vector<int>& timestep);

/// Test-block RMSE divided by the population standard deviation of the
/// targets. Predicting the target mean gives exactly 1.
double nrmse(const std::vector<double>& y_true, const std::vector<double>& y_pred);

}  // namespace qrc::readout
