#include <algorithm>
#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "qrc/rng.hpp"
#include "qrc/stats.hpp"

using namespace qrc::stats;

namespace {

// Independent oracle: literal enumeration of all 2^n sign assignments with
// average ranks, two-sided tail doubling. Kept separate from the library's
// dynamic-programming path on purpose.
double enumeration_oracle(const std::vector<double>& diffs) {
  std::vector<double> mag;
  std::vector<bool> pos;
  for (const double d : diffs) {
    if (d == 0.0) continue;
    mag.push_back(std::abs(d));
    pos.push_back(d > 0.0);
  }
  const std::size_t m = mag.size();
  if (m == 0) return 1.0;

  std::vector<double> ranks(m);
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&mag](std::size_t i, std::size_t j) { return mag[i] < mag[j]; });
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && mag[order[j + 1]] == mag[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j + 1);
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = avg;
    i = j + 1;
  }

  double w = 0.0;
  for (std::size_t p = 0; p < m; ++p) {
    if (pos[p]) w += ranks[p];
  }

  long below = 0, above = 0;
  const long total = 1L << m;
  for (long mask = 0; mask < total; ++mask) {
    double s = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
      if ((mask >> p) & 1) s += ranks[p];
    }
    if (s <= w + 1e-9) ++below;
    if (s >= w - 1e-9) ++above;
  }
  const double p = 2.0 * std::min(below, above) / static_cast<double>(total);
  return std::min(p, 1.0);
}

}  // namespace

TEST_CASE("paired gap summaries") {
  SUBCASE("identical positive gaps") {
    const auto s = paired_gap_stats({{2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}});
    CHECK(s.mean_gap == 1.0);
    CHECK(s.sd_gap == 0.0);
    CHECK(s.win_rate == 1.0);
  }

  SUBCASE("exactly equal methods") {
    const auto s = paired_gap_stats({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}});
    CHECK(s.mean_gap == 0.0);
    CHECK(s.win_rate == 0.5);
    CHECK(s.wilcoxon_p == 1.0);
  }

  SUBCASE("gaps 1, 2, 3") {
    const auto s = paired_gap_stats({{1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}});
    CHECK(s.mean_gap == 2.0);
    CHECK(s.sd_gap == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
    CHECK(s.ci95_half_width == doctest::Approx(1.96 / std::sqrt(3.0)).epsilon(1e-12));
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(paired_gap_stats({{1.0}, {2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(paired_gap_stats({{1.0, 2.0}, {2.0}}), std::invalid_argument);
  }
}

TEST_CASE("wilcoxon exact values") {
  SUBCASE("five positive distinct differences") {
    CHECK(wilcoxon_signed_rank({1.0, 2.0, 3.0, 4.0, 5.0}) == doctest::Approx(0.0625).epsilon(1e-15));
  }

  SUBCASE("symmetric +-c differences sit at the null mean") {
    CHECK(wilcoxon_signed_rank({1.0, -1.0, 2.0, -2.0}) == 1.0);
  }

  SUBCASE("all zero differences") {
    CHECK(wilcoxon_signed_rank({0.0, 0.0, 0.0}) == 1.0);
  }

  SUBCASE("published fixture") {
    // Paired measurements from the classic R wilcox.test example
    // (first/second week counts); exact two-sided p = 0.0390625.
    const std::vector<double> x = {1.83, 0.50, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06, 1.30};
    const std::vector<double> y = {0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14, 1.29};
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    const double p = wilcoxon_signed_rank(d);
    CHECK(std::abs(p - 0.0390625) < 1e-3);
    CHECK(std::abs(p - enumeration_oracle(d)) < 1e-12);
  }
}

TEST_CASE("library path matches the enumeration oracle on random data") {
  qrc::rng::Xoshiro256 gen(50);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(gen.uniform() * 9);
    std::vector<double> d(n);
    for (auto& v : d) v = gen.uniform(-1.0, 1.0);
    if (trial % 3 == 0) d[0] = d[1];  // occasional tied magnitudes
    CAPTURE(trial);
    CHECK(wilcoxon_exact_p(d) == doctest::Approx(enumeration_oracle(d)).epsilon(1e-12));
  }
}

TEST_CASE("exact and normal paths agree at n = 20") {
  qrc::rng::Xoshiro256 gen(51);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> d(20);
    for (auto& v : d) v = gen.uniform(-1.0, 1.0) + 0.15;
    const double pe = wilcoxon_exact_p(d);
    const double pn = wilcoxon_normal_p(d);
    CAPTURE(trial);
    CHECK(std::abs(pe - pn) < 0.02);
  }
}

TEST_CASE("rank-based invariances") {
  qrc::rng::Xoshiro256 gen(52);
  std::vector<double> a(12), b(12);
  for (std::size_t i = 0; i < 12; ++i) {
    a[i] = gen.uniform(0.0, 2.0);
    b[i] = gen.uniform(0.0, 2.0);
  }

  SUBCASE("positive affine transform of both members") {
    std::vector<double> d1(12), d2(12);
    for (std::size_t i = 0; i < 12; ++i) {
      d1[i] = a[i] - b[i];
      d2[i] = (3.0 * a[i] + 1.0) - (3.0 * b[i] + 1.0);
    }
    CHECK(wilcoxon_signed_rank(d1) == doctest::Approx(wilcoxon_signed_rank(d2)).epsilon(1e-12));
  }

  SUBCASE("swapping A and B") {
    const auto ab = paired_gap_stats({a, b});
    const auto ba = paired_gap_stats({b, a});
    CHECK(ab.mean_gap == doctest::Approx(-ba.mean_gap).epsilon(1e-14));
    CHECK(ab.win_rate == doctest::Approx(1.0 - ba.win_rate).epsilon(1e-14));
    CHECK(ab.wilcoxon_p == doctest::Approx(ba.wilcoxon_p).epsilon(1e-12));
  }
}
