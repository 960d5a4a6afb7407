#include "qrc/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "qrc/readout.hpp"
#include "qrc/rng.hpp"

namespace qrc::protocol {

int budget_timesteps(const BudgetSpec& budget) {
  if (budget.s_total <= 0 || budget.settings <= 0 || budget.n_shots <= 0) {
    throw std::invalid_argument("budget fields must be positive");
  }
  const long t = budget.s_total / (static_cast<long>(budget.settings) * budget.n_shots);
  if (t < budget.washout + 10) {
    throw std::invalid_argument("budget leaves too few labeled time steps");
  }
  return static_cast<int>(t);
}

double rho_ev(const BudgetSpec& budget, int qubits, int window) {
  const int t = budget_timesteps(budget);
  // 0.7 * (T - t0) / (2QL) as one rounding of the exact rational
  // 7(T - t0) / (20QL); this reproduces the printed decimal values.
  return (7.0 * (t - budget.washout)) / (20.0 * qubits * window);
}

SplitIndex chronological_split(int timesteps, const BudgetSpec& budget) {
  const int t0 = budget.washout;
  if (timesteps <= t0) throw std::invalid_argument("no steps left after washout");
  const int remainder = timesteps - t0;
  const int trainval_n = static_cast<int>(std::floor(budget.train_frac * remainder));
  const int test_n = remainder - trainval_n;
  const int val_n = static_cast<int>(std::floor(budget.val_frac_of_train * trainval_n));
  const int fit_n = trainval_n - val_n;
  if (trainval_n <= 0 || test_n <= 0 || val_n <= 0 || fit_n <= 0) {
    throw std::invalid_argument("chronological split produced an empty block");
  }

  SplitIndex s;
  for (int t = 0; t < t0; ++t) s.washout.push_back(t);
  for (int t = t0; t < t0 + fit_n; ++t) s.fit.push_back(t);
  for (int t = t0 + fit_n; t < t0 + trainval_n; ++t) s.validation.push_back(t);
  for (int t = t0; t < t0 + trainval_n; ++t) s.trainval.push_back(t);
  for (int t = t0 + trainval_n; t < timesteps; ++t) s.test.push_back(t);
  return s;
}

std::string to_string(ProtocolId p) {
  switch (p) {
    case ProtocolId::Ev: return "ev";
    case ProtocolId::Raw: return "raw";
    case ProtocolId::Split: return "split";
    case ProtocolId::EvDup: return "ev_dup";
    case ProtocolId::EvNA: return "ev_na";
    case ProtocolId::SplitNA: return "split_na";
  }
  return "unknown";
}

ProtocolId protocol_from_string(const std::string& s) {
  if (s == "ev") return ProtocolId::Ev;
  if (s == "raw") return ProtocolId::Raw;
  if (s == "split") return ProtocolId::Split;
  if (s == "ev_dup") return ProtocolId::EvDup;
  if (s == "ev_na") return ProtocolId::EvNA;
  if (s == "split_na") return ProtocolId::SplitNA;
  throw std::invalid_argument("unknown protocol: " + s);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t fnv_bytes(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t standardizer_checksum(const readout::Standardizer& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv_bytes(h, s.mean.data(), s.mean.size() * sizeof(double));
  h = fnv_bytes(h, s.inv_std.data(), s.inv_std.size() * sizeof(double));
  return h;
}

std::vector<double> targets_for_block(const std::vector<double>& targets_by_step,
                                      const std::vector<int>& block) {
  std::vector<double> out;
  out.reserve(block.size());
  for (const int t : block) out.push_back(targets_by_step.at(static_cast<std::size_t>(t)));
  return out;
}

shotorg::GroupingPlan make_plan(ProtocolId protocol, int k, int n_shots) {
  switch (protocol) {
    case ProtocolId::Ev:
    case ProtocolId::EvNA:
      return shotorg::GroupingPlan::ev(n_shots);
    case ProtocolId::Raw:
      return shotorg::GroupingPlan::raw();
    case ProtocolId::Split:
    case ProtocolId::SplitNA:
      return shotorg::GroupingPlan::split(k);
    case ProtocolId::EvDup:
      return shotorg::GroupingPlan::ev_dup(k);
  }
  throw std::invalid_argument("unknown protocol");
}

bool is_split_family(ProtocolId p) {
  return p == ProtocolId::Split || p == ProtocolId::SplitNA || p == ProtocolId::EvDup;
}

bool is_noise_aware(ProtocolId p) {
  return p == ProtocolId::EvNA || p == ProtocolId::SplitNA;
}

constexpr double kGammaGrid[] = {0.0, 0.1, 0.3, 1.0, 3.0, 10.0};
constexpr double kTieTolerance = 1e-12;

struct FitOutcome {
  readout::RidgeModel model;
  readout::Standardizer standardizer;
};

// Organize + standardize + fit on one block.
FitOutcome fit_block(const features::FeatureTensor& feats,
                     const std::vector<double>& targets_by_step, const std::vector<int>& block,
                     const shotorg::GroupingPlan& plan, double lambda, double gamma,
                     double* fit_seconds) {
  const auto ds = shotorg::organize(feats, targets_by_step, block, plan);
  const auto start = Clock::now();
  FitOutcome out;
  out.standardizer = readout::fit_standardizer(ds.x);
  const Matrix xs = readout::apply_standardizer(out.standardizer, ds.x);
  if (gamma > 0.0) {
    auto sigma2 = readout::estimate_feature_noise_var(feats, block, plan.group_size);
    sigma2 = readout::noise_var_to_standardized(sigma2, out.standardizer);
    out.model = readout::noise_aware_fit(xs, ds.y, lambda, gamma, sigma2);
  } else {
    out.model = readout::ridge_fit(xs, ds.y, lambda);
  }
  if (fit_seconds != nullptr) *fit_seconds += seconds_since(start);
  return out;
}

// Predict on a block with an already-fitted model, aggregate per step, score.
double score_block(const features::FeatureTensor& feats,
                   const std::vector<double>& targets_by_step, const std::vector<int>& block,
                   const shotorg::GroupingPlan& plan, const FitOutcome& fit) {
  const auto ds = shotorg::organize(feats, targets_by_step, block, plan);
  const Matrix xs = readout::apply_standardizer(fit.standardizer, ds.x);
  const auto preds = readout::aggregate_predictions(readout::predict(fit.model, xs), ds.timestep);
  return readout::nrmse(targets_for_block(targets_by_step, block), preds.values);
}

}  // namespace

RunResult run_on_features(const features::FeatureTensor& feats,
                          const std::vector<double>& targets_by_step, const SplitIndex& split,
                          const RunConfig& config, std::uint64_t record_hash) {
  const auto total_start = Clock::now();
  const int n_shots = feats.n_shots;

  RunResult result;
  result.config = config;
  result.record_hash = record_hash;
  result.rho_ev = rho_ev(config.budget, config.qubits, config.window);
  result.trainval_steps = static_cast<int>(split.trainval.size());
  result.rho_ev_blocks = static_cast<double>(result.trainval_steps) / feats.dim;

  // Candidate group sizes.
  std::vector<int> k_candidates;
  if (config.protocol == ProtocolId::Ev || config.protocol == ProtocolId::EvNA) {
    k_candidates = {n_shots};
  } else if (config.protocol == ProtocolId::Raw) {
    k_candidates = {1};
  } else if (config.forced_k > 0) {
    k_candidates = {config.forced_k};
  } else {
    k_candidates = shotorg::internal_divisors(n_shots);
    if (k_candidates.empty()) {
      k_candidates = {n_shots};
      result.ev_fallback = true;
    }
  }

  // Warm start seeds the evaluation order of the divisor search.
  if (is_split_family(config.protocol) && config.forced_k == 0 && !result.ev_fallback) {
    const auto noise = shotorg::estimate_noise_ratio(feats, split.fit);
    result.noise_degenerate = noise.degenerate;
    result.warm_start_k =
        shotorg::warm_start_k({noise.value, 1.0}, result.rho_ev, n_shots);
    const auto pivot = std::find(k_candidates.begin(), k_candidates.end(), result.warm_start_k);
    if (pivot != k_candidates.end()) {
      std::rotate(k_candidates.begin(), pivot, k_candidates.end());
    }
  }

  const bool noise_aware = is_noise_aware(config.protocol);
  const std::vector<double> gammas =
      noise_aware ? std::vector<double>(std::begin(kGammaGrid), std::end(kGammaGrid))
                  : std::vector<double>{0.0};

  for (const int k : k_candidates) {
    const auto plan = make_plan(config.protocol, k, n_shots);
    for (const double gamma : gammas) {
      const auto fit =
          fit_block(feats, targets_by_step, split.fit, plan, config.lambda, gamma,
                    &result.fit_seconds);
      const double val = score_block(feats, targets_by_step, split.validation, plan, fit);
      result.candidates.push_back({k, gamma, val});
    }
  }

  // Minimum validation NRMSE; near-ties resolve to the smaller k, then the
  // smaller gamma. Scanned in (k, gamma) order so the rule is independent
  // of the warm-start rotation.
  auto ordered = result.candidates;
  std::sort(ordered.begin(), ordered.end(), [](const CandidateScore& a, const CandidateScore& b) {
    return a.k != b.k ? a.k < b.k : a.gamma < b.gamma;
  });
  const CandidateScore* best = &ordered.front();
  for (const auto& c : ordered) {
    if (c.val_nrmse < best->val_nrmse - kTieTolerance) best = &c;
  }

  result.selected_k = best->k;
  result.selected_gamma = best->gamma;
  result.val_nrmse = best->val_nrmse;
  result.rho_k = shotorg::rho_k(n_shots, best->k, result.rho_ev);

  // Selection-time standardizer checksum for the leakage diagnostics.
  {
    const auto plan = make_plan(config.protocol, best->k, n_shots);
    const auto ds = shotorg::organize(feats, targets_by_step, split.fit, plan);
    result.std_fit_checksum = standardizer_checksum(readout::fit_standardizer(ds.x));
  }

  // Post-selection refit on the full trainval block, then one test pass.
  const auto plan = make_plan(config.protocol, best->k, n_shots);
  const auto refit = fit_block(feats, targets_by_step, split.trainval, plan, config.lambda,
                               best->gamma, &result.fit_seconds);
  result.std_refit_checksum = standardizer_checksum(refit.standardizer);
  result.test_nrmse = score_block(feats, targets_by_step, split.test, plan, refit);
  result.test_evaluations += 1;

  result.total_seconds = seconds_since(total_start);
  return result;
}

namespace {

// Normalized series values for a record's driving seed; one extra sample so
// the final labeled step keeps its next-step target.
std::vector<double> normalized_series(timeseries::Task task, std::uint64_t series_seed,
                                      int timesteps, const BudgetSpec& budget,
                                      const SplitIndex& split) {
  timeseries::SeriesSpec spec;
  spec.task = task;
  spec.length = timesteps + 1;
  spec.seed = series_seed;
  const auto raw = timeseries::generate(spec);
  const int prefix = budget.washout + static_cast<int>(split.trainval.size());
  return timeseries::normalize_input(raw, prefix).values;
}

}  // namespace

quantum::ShotRecord simulate_record(const RunConfig& config) {
  const int timesteps = budget_timesteps(config.budget);
  const SplitIndex split = chronological_split(timesteps, config.budget);
  const std::uint64_t series_seed = rng::derive_stream(config.seed, rng::Stream::Series);
  const auto values = normalized_series(config.task, series_seed, timesteps, config.budget, split);
  const std::vector<double> inputs(values.begin(), values.begin() + timesteps);

  const auto reservoir = quantum::build_reservoir(
      rng::derive_stream(config.seed, rng::Stream::Reservoir), config.qubits, config.depth,
      config.entangler);
  auto record = quantum::run_sequence(reservoir, inputs, config.budget.n_shots,
                                      rng::derive_stream(config.seed, rng::Stream::Sampling));
  record.meta.series_seed = series_seed;
  record.meta.task = timeseries::to_string(config.task);
  return record;
}

RunResult run_on_record(const quantum::ShotRecord& record, const RunConfig& config) {
  const auto total_start = Clock::now();
  const int timesteps = budget_timesteps(config.budget);
  if (record.meta.timesteps != timesteps || record.meta.n_shots != config.budget.n_shots ||
      record.meta.qubits != config.qubits) {
    throw std::invalid_argument("record dimensions inconsistent with config");
  }
  if (record.meta.series_seed == 0) {
    throw std::invalid_argument("record lacks a series seed; targets cannot be rebuilt");
  }
  const SplitIndex split = chronological_split(timesteps, config.budget);
  const auto values =
      normalized_series(config.task, record.meta.series_seed, timesteps, config.budget, split);
  const std::vector<double> targets_by_step(values.begin() + 1, values.end());

  const auto feats = features::build_features(record, {config.leak, config.window});
  RunResult result = run_on_features(feats, targets_by_step, split, config, record.hash());
  result.total_seconds = seconds_since(total_start);
  return result;
}

RunResult run_pipeline(const RunConfig& config) {
  const auto total_start = Clock::now();
  const auto record = simulate_record(config);
  RunResult result = run_on_record(record, config);
  result.total_seconds = seconds_since(total_start);
  return result;
}

}  // namespace qrc::protocol
