#include "qrc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace qrc::stats {

namespace {

struct RankedDiffs {
  // Ranks doubled so average ranks of ties stay integral.
  std::vector<std::int64_t> ranks2;
  std::int64_t w_plus2 = 0;  // 2 * signed-rank statistic W+
  std::vector<int> tie_sizes;
};

RankedDiffs rank_differences(const std::vector<double>& diffs) {
  std::vector<double> mag;
  std::vector<bool> positive;
  for (const double d : diffs) {
    if (d == 0.0) continue;  // zero differences are dropped
    mag.push_back(std::abs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t m = mag.size();

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&mag](std::size_t i, std::size_t j) { return mag[i] < mag[j]; });

  RankedDiffs out;
  out.ranks2.resize(m);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && mag[order[j + 1]] == mag[order[i]]) ++j;
    // Positions i..j (1-based ranks i+1..j+1) share the average rank.
    const std::int64_t rank2 = static_cast<std::int64_t>(i + 1 + j + 1);  // 2 * average
    for (std::size_t p = i; p <= j; ++p) out.ranks2[order[p]] = rank2;
    out.tie_sizes.push_back(static_cast<int>(j - i + 1));
    i = j + 1;
  }
  for (std::size_t p = 0; p < m; ++p) {
    if (positive[p]) out.w_plus2 += out.ranks2[p];
  }
  return out;
}

double normal_sf_times_two(double z) {
  // 2 * (1 - Phi(z)) for z >= 0.
  return std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double wilcoxon_exact_p(const std::vector<double>& diffs) {
  const auto ranked = rank_differences(diffs);
  const std::size_t m = ranked.ranks2.size();
  if (m == 0) return 1.0;
  if (m > 62) throw std::invalid_argument("exact Wilcoxon limited to 62 pairs");

  // Null distribution of 2*W+ by dynamic programming over sign assignments.
  std::int64_t total2 = 0;
  for (const auto r : ranked.ranks2) total2 += r;
  std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
  counts[0] = 1.0;
  std::int64_t reach = 0;
  for (const auto r : ranked.ranks2) {
    reach += r;
    for (std::int64_t s = reach; s >= r; --s) counts[s] += counts[s - r];
  }

  double below = 0.0, above = 0.0, all = 0.0;
  for (std::int64_t s = 0; s <= total2; ++s) {
    all += counts[s];
    if (s <= ranked.w_plus2) below += counts[s];
    if (s >= ranked.w_plus2) above += counts[s];
  }
  const double p = 2.0 * std::min(below, above) / all;
  return std::min(p, 1.0);
}

double wilcoxon_normal_p(const std::vector<double>& diffs) {
  const auto ranked = rank_differences(diffs);
  const double m = static_cast<double>(ranked.ranks2.size());
  if (m == 0.0) return 1.0;

  const double mu = m * (m + 1.0) / 4.0;
  double var = m * (m + 1.0) * (2.0 * m + 1.0) / 24.0;
  for (const int t : ranked.tie_sizes) {
    var -= (static_cast<double>(t) * t * t - t) / 48.0;
  }
  if (var <= 0.0) return 1.0;

  const double w = static_cast<double>(ranked.w_plus2) / 2.0;
  const double z = std::max(0.0, std::abs(w - mu) - 0.5) / std::sqrt(var);
  return std::min(normal_sf_times_two(z), 1.0);
}

double wilcoxon_signed_rank(const std::vector<double>& diffs) {
  std::size_t m = 0;
  for (const double d : diffs) {
    if (d != 0.0) ++m;
  }
  if (m == 0) return 1.0;
  return m <= static_cast<std::size_t>(kWilcoxonExactLimit) ? wilcoxon_exact_p(diffs)
                                                            : wilcoxon_normal_p(diffs);
}

SummaryStats paired_gap_stats(const PairedSample& sample) {
  if (sample.a.size() != sample.b.size()) throw std::invalid_argument("unpaired sample");
  const std::size_t n = sample.a.size();
  if (n < 2) throw std::invalid_argument("need at least 2 pairs");

  std::vector<double> gaps(n);
  for (std::size_t i = 0; i < n; ++i) gaps[i] = sample.a[i] - sample.b[i];

  SummaryStats s;
  s.n = static_cast<int>(n);
  for (const double g : gaps) s.mean_gap += g;
  s.mean_gap /= static_cast<double>(n);

  double ssq = 0.0;
  for (const double g : gaps) ssq += (g - s.mean_gap) * (g - s.mean_gap);
  s.sd_gap = std::sqrt(ssq / static_cast<double>(n));
  const double sample_sd = std::sqrt(ssq / static_cast<double>(n - 1));
  s.ci95_half_width = 1.96 * sample_sd / std::sqrt(static_cast<double>(n));

  double wins = 0.0;
  for (const double g : gaps) {
    if (g > 0.0) {
      wins += 1.0;
    } else if (g == 0.0) {
      wins += 0.5;
    }
  }
  s.win_rate = wins / static_cast<double>(n);
  s.wilcoxon_p = wilcoxon_signed_rank(gaps);
  return s;
}

}  // namespace qrc::stats
