#pragma once

#include <vector>

#include "qrc/features.hpp"
#include "qrc/matrix.hpp"

namespace qrc::shotorg {

/// Shot-record organization protocols. EV averages all shots of a time
/// step, Raw keeps every shot, Split averages disjoint groups of size k,
/// EvDup repeats the EV row once per group as a duplication control.
enum class Protocol { EV, Raw, Split, EvDup };

struct GroupingPlan {
  Protocol protocol = Protocol::EV;
  int group_size = 1;  // k; must divide N_shots

  static GroupingPlan ev(int n_shots) { return {Protocol::EV, n_shots}; }
  static GroupingPlan raw() { return {Protocol::Raw, 1}; }
  static GroupingPlan split(int k) { return {Protocol::Split, k}; }
  static GroupingPlan ev_dup(int k) { return {Protocol::EvDup, k}; }

  int groups(int n_shots) const { return n_shots / group_size; }
  /// Throws unless k divides n_shots and matches the protocol endpoints
  /// (EV => k = N, Raw => k = 1).
  void validate(int n_shots) const;
};

/// Design matrix produced by a grouping plan over one chronological block:
/// G rows per time step, every row paired with that step's target.
struct GroupedDataset {
  Matrix x;
  std::vector<double> y;
  std::vector<int> timestep;  // row -> labeled time step
  GroupingPlan plan;
};

/// All k with k | n_shots and 1 < k < n_shots, ascending.
std::vector<int> internal_divisors(int n_shots);

/// targets_by_step[t] is the forecast target paired with step t.
GroupedDataset organize(const features::FeatureTensor& feats,
                        const std::vector<double>& targets_by_step,
                        const std::vector<int>& block, const GroupingPlan& plan);

/// rho_k = (N_shots / k) * rho_ev.
double rho_k(int n_shots, int k, double rho_ev);

struct NoiseRatioEstimate {
  double value = 0.0;
  bool degenerate = false;  // across-time variance below floor; value is +inf
};

/// Scalar noise-to-signal ratio a: mean within-step shot variance of the
/// features divided by mean across-time variance of the EV features, both
/// unbiased and averaged over coordinates with equal weight.
NoiseRatioEstimate estimate_noise_ratio(const features::FeatureTensor& feats,
                                        const std::vector<int>& block);

struct WarmStartParams {
  double noise_ratio = 0.0;  // a
  double tradeoff = 1.0;     // 2*alpha/beta
};

/// Closed-form group-size initializer: (tradeoff * a^2 * rho_ev * N)^(1/3) - a,
/// clipped to [1, N] and snapped to the nearest internal divisor (ties to
/// the smaller one). Returns N_shots when no internal divisor exists.
int warm_start_k(const WarmStartParams& params, double rho_ev, int n_shots);

}  // namespace qrc::shotorg
