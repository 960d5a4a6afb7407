#include "qrc/shotorg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "qrc/kernels.hpp"

namespace qrc::shotorg {

void GroupingPlan::validate(int n_shots) const {
  if (group_size < 1 || group_size > n_shots || n_shots % group_size != 0) {
    throw std::invalid_argument("group size must divide N_shots");
  }
  if (protocol == Protocol::EV && group_size != n_shots) {
    throw std::invalid_argument("EV requires k = N_shots");
  }
  if (protocol == Protocol::Raw && group_size != 1) {
    throw std::invalid_argument("Raw requires k = 1");
  }
}

std::vector<int> internal_divisors(int n_shots) {
  if (n_shots < 2) throw std::invalid_argument("N_shots must be at least 2");
  std::vector<int> out;
  for (int k = 2; k < n_shots; ++k) {
    if (n_shots % k == 0) out.push_back(k);
  }
  return out;
}

namespace {

// dst = mean of the shot rows [first, first+count) at time step t.
void group_mean(const features::FeatureTensor& feats, int t, int first, int count, double* dst) {
  const int d = feats.dim;
  std::memset(dst, 0, sizeof(double) * d);
  const auto& ops = kernels::active();
  for (int n = first; n < first + count; ++n) {
    ops.add_rows(dst, feats.feature(t, n), d);
  }
  ops.scale(dst, 1.0 / count, d);
}

}  // namespace

GroupedDataset organize(const features::FeatureTensor& feats,
                        const std::vector<double>& targets_by_step,
                        const std::vector<int>& block, const GroupingPlan& plan) {
  plan.validate(feats.n_shots);
  const int n_shots = feats.n_shots;
  const int k = plan.group_size;
  const int groups = n_shots / k;
  const int d = feats.dim;

  GroupedDataset out;
  out.plan = plan;
  out.x = Matrix(block.size() * groups, d);
  out.y.reserve(block.size() * groups);
  out.timestep.reserve(block.size() * groups);

  std::size_t row = 0;
  std::vector<double> ev_row(d);
  for (const int t : block) {
    if (t < 0 || t >= feats.timesteps) throw std::invalid_argument("block step outside record");
    const double target = targets_by_step.at(static_cast<std::size_t>(t));
    if (plan.protocol == Protocol::EvDup) {
      group_mean(feats, t, 0, n_shots, ev_row.data());
      for (int g = 0; g < groups; ++g) {
        std::memcpy(out.x.row(row++), ev_row.data(), sizeof(double) * d);
        out.y.push_back(target);
        out.timestep.push_back(t);
      }
    } else {
      for (int g = 0; g < groups; ++g) {
        group_mean(feats, t, g * k, k, out.x.row(row++));
        out.y.push_back(target);
        out.timestep.push_back(t);
      }
    }
  }
  return out;
}

double rho_k(int n_shots, int k, double rho_ev) {
  if (k < 1 || n_shots % k != 0) throw std::invalid_argument("k must divide N_shots");
  return rho_ev * (n_shots / k);
}

NoiseRatioEstimate estimate_noise_ratio(const features::FeatureTensor& feats,
                                        const std::vector<int>& block) {
  if (block.size() < 2) throw std::invalid_argument("need at least 2 steps");
  if (feats.n_shots < 2) throw std::invalid_argument("need at least 2 shots");

  const int d = feats.dim;
  const int n = feats.n_shots;
  const auto& ops = kernels::active();

  // Mean within-step shot variance (unbiased over shots, averaged over
  // steps and coordinates) and the per-step EV features.
  std::vector<double> within(d, 0.0);
  std::vector<double> step_mean(d);
  Matrix ev(block.size(), d);
  for (std::size_t bi = 0; bi < block.size(); ++bi) {
    const int t = block[bi];
    group_mean(feats, t, 0, n, step_mean.data());
    std::memcpy(ev.row(bi), step_mean.data(), sizeof(double) * d);
    for (int s = 0; s < n; ++s) {
      ops.accum_sq_diff(within.data(), feats.feature(t, s), step_mean.data(), d);
    }
  }
  double within_mean = 0.0;
  const double within_dof = static_cast<double>(block.size()) * (n - 1);
  for (int j = 0; j < d; ++j) within_mean += within[j] / within_dof;
  within_mean /= d;

  // Mean across-time variance of the EV features (unbiased over steps).
  std::vector<double> ev_mean(d, 0.0);
  for (std::size_t bi = 0; bi < block.size(); ++bi) ops.add_rows(ev_mean.data(), ev.row(bi), d);
  ops.scale(ev_mean.data(), 1.0 / static_cast<double>(block.size()), d);
  std::vector<double> across(d, 0.0);
  for (std::size_t bi = 0; bi < block.size(); ++bi) {
    ops.accum_sq_diff(across.data(), ev.row(bi), ev_mean.data(), d);
  }
  double across_mean = 0.0;
  for (int j = 0; j < d; ++j) across_mean += across[j] / (static_cast<double>(block.size()) - 1);
  across_mean /= d;

  if (across_mean < 1e-12) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {within_mean / across_mean, false};
}

int warm_start_k(const WarmStartParams& params, double rho_ev, int n_shots) {
  if (!(rho_ev > 0.0)) throw std::invalid_argument("rho_ev must be positive");
  if (n_shots < 2) throw std::invalid_argument("N_shots must be at least 2");

  const auto divisors = internal_divisors(n_shots);
  if (divisors.empty()) return n_shots;  // EV fallback

  const double a = params.noise_ratio;
  double k_cont;
  if (!std::isfinite(a)) {
    k_cont = static_cast<double>(n_shots);  // pure-noise limit: full averaging
  } else {
    k_cont = std::cbrt(params.tradeoff * a * a * rho_ev * n_shots) - a;
  }
  k_cont = std::clamp(k_cont, 1.0, static_cast<double>(n_shots));

  int best = divisors.front();
  double best_dist = std::abs(k_cont - best);
  for (const int k : divisors) {
    const double dist = std::abs(k_cont - k);
    if (dist < best_dist) {  // ties keep the smaller divisor
      best = k;
      best_dist = dist;
    }
  }
  return best;
}

}  // namespace qrc::shotorg
