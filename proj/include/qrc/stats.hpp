#pragma once

#include <vector>

namespace qrc::stats {

/// Per-seed value pairs (method A, method B), paired by identical seed.
struct PairedSample {
  std::vector<double> a;
  std::vector<double> b;
};

struct SummaryStats {
  int n = 0;
  double mean_gap = 0.0;   // mean of A - B
  double sd_gap = 0.0;     // population SD of the gaps
  double win_rate = 0.0;   // positive gaps win, ties get half credit
  double wilcoxon_p = 1.0; // two-sided signed-rank p on the gaps
  double ci95_half_width = 0.0;  // 1.96 * sample SD / sqrt(n)
};

SummaryStats paired_gap_stats(const PairedSample& sample);

/// Two-sided Wilcoxon signed-rank p-value on paired differences. Zero
/// differences are dropped; tied magnitudes share average ranks. Uses the
/// exact null distribution up to kExactLimit effective pairs, then a normal
/// approximation with tie and continuity corrections.
constexpr int kWilcoxonExactLimit = 20;

double wilcoxon_signed_rank(const std::vector<double>& diffs);

/// Forced paths, exposed so the agreement between them can be tested.
double wilcoxon_exact_p(const std::vector<double>& diffs);
double wilcoxon_normal_p(const std::vector<double>& diffs);

}  // namespace qrc::stats
