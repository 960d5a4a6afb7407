#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrc/features.hpp"
#include "qrc/quantum.hpp"
#include "qrc/shotorg.hpp"
#include "qrc/timeseries.hpp"

namespace qrc::protocol {

struct BudgetSpec {
  long s_total = 12000;  // total circuit executions
  int settings = 2;      // measurement settings R (Z and X)
  int n_shots = 18;
  int washout = 30;
  double train_frac = 0.7;
  double val_frac_of_train = 0.25;
};

/// T = floor(S_total / (R * N_shots)); throws when the budget leaves fewer
/// than washout + 10 labeled steps.
int budget_timesteps(const BudgetSpec& budget);

/// Training-support ratio 0.7 * (T - t0) / (2QL), evaluated as a single
/// correctly rounded rational so the sweep values match their printed
/// decimal forms exactly.
double rho_ev(const BudgetSpec& budget, int qubits, int window);

/// Disjoint chronological blocks over the labeled steps 0..T-1.
struct SplitIndex {
  std::vector<int> washout;
  std::vector<int> fit;         // trainval minus validation
  std::vector<int> validation;  // final quarter of trainval
  std::vector<int> trainval;
  std::vector<int> test;
};

SplitIndex chronological_split(int timesteps, const BudgetSpec& budget);

enum class ProtocolId { Ev, Raw, Split, EvDup, EvNA, SplitNA };

std::string to_string(ProtocolId p);
ProtocolId protocol_from_string(const std::string& s);

struct RunConfig {
  timeseries::Task task = timeseries::Task::MackeyGlass;
  int qubits = 4;
  int depth = 1;
  quantum::Entangler entangler = quantum::Entangler::RingCnot;
  double leak = 0.2;
  int window = 10;
  double lambda = 10.0;
  BudgetSpec budget{};
  ProtocolId protocol = ProtocolId::Split;
  int forced_k = 0;  // 0 = select k on validation
  std::uint64_t seed = 1;
};

struct CandidateScore {
  int k = 0;
  double gamma = 0.0;
  double val_nrmse = 0.0;
};

struct RunResult {
  RunConfig config{};
  int selected_k = 0;
  double selected_gamma = 0.0;
  double val_nrmse = 0.0;
  double test_nrmse = 0.0;
  double rho_ev = 0.0;        // real-valued formula, as reported
  double rho_ev_blocks = 0.0; // trainval_steps / d, the integer-exact ratio
  double rho_k = 0.0;
  int trainval_steps = 0;
  int warm_start_k = 0;  // 0 when no search ran
  bool ev_fallback = false;
  bool noise_degenerate = false;
  std::uint64_t record_hash = 0;
  std::vector<CandidateScore> candidates;  // evaluation order
  double fit_seconds = 0.0;
  double total_seconds = 0.0;
  // Diagnostics for the leakage checks: FNV hashes of the standardizer
  // fitted during selection (fit block) and at the final refit (trainval),
  // and the number of times the test block was scored (must be 1).
  std::uint64_t std_fit_checksum = 0;
  std::uint64_t std_refit_checksum = 0;
  int test_evaluations = 0;
};

/// Series generation plus reservoir simulation for one config: the shot
/// record the protocol stage consumes. The record carries the task name
/// and series seed so it can be exported and re-analyzed.
quantum::ShotRecord simulate_record(const RunConfig& config);

/// Protocol stage on an existing record (simulated or imported): rebuilds
/// the driving series from the record's series seed, derives features, and
/// runs selection/refit/test. run_pipeline is exactly simulate_record
/// followed by this.
RunResult run_on_record(const quantum::ShotRecord& record, const RunConfig& config);

/// Full deterministic run: series -> shots -> features -> selection on
/// validation -> refit on trainval -> one test evaluation.
RunResult run_pipeline(const RunConfig& config);

/// Protocol stage only, on prebuilt features (used by the shot-record
/// import path and by tests). targets_by_step[t] pairs step t with its
/// next-step target.
RunResult run_on_features(const features::FeatureTensor& feats,
                          const std::vector<double>& targets_by_step, const SplitIndex& split,
                          const RunConfig& config, std::uint64_t record_hash);

}  // namespace qrc::protocol
