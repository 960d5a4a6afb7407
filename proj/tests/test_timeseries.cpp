#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "qrc/rng.hpp"
#include "qrc/timeseries.hpp"

using namespace qrc::timeseries;

namespace {

SeriesSpec spec_of(Task task, int length, std::uint64_t seed) {
  SeriesSpec s;
  s.task = task;
  s.length = length;
  s.seed = seed;
  return s;
}

double sample_variance(const std::vector<double>& v) {
  double mean = 0.0;
  for (const double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ssq = 0.0;
  for (const double x : v) ssq += (x - mean) * (x - mean);
  return ssq / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("mackey-glass fixed point at constant history 1") {
  MackeyGlassParams p;
  CHECK(mackey_glass_derivative(1.0, 1.0, p) == doctest::Approx(0.0).epsilon(1e-15));
  // Euler steps from the all-ones history stay at the fixed point.
  double x = 1.0;
  for (int i = 0; i < 100; ++i) x += p.dt * mackey_glass_derivative(x, 1.0, p);
  CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generators are deterministic per spec") {
  for (const Task task : {Task::MackeyGlass, Task::Lorenz, Task::Narma10}) {
    CAPTURE(to_string(task));
    const auto a = generate(spec_of(task, 333, 1));
    const auto b = generate(spec_of(task, 333, 1));
    const auto c = generate(spec_of(task, 333, 2));
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK(a.values.size() == 333);
  }
}

TEST_CASE("mackey-glass series is non-degenerate") {
  const auto s = generate(spec_of(Task::MackeyGlass, 333, 1));
  CHECK(sample_variance(s.values) > 1e-6);
}

TEST_CASE("lorenz fixed point at the origin") {
  LorenzParams p;
  const auto next = lorenz_rk4_step({0.0, 0.0, 0.0}, p);
  CHECK(next[0] == 0.0);
  CHECK(next[1] == 0.0);
  CHECK(next[2] == 0.0);
}

TEST_CASE("lorenz trajectory stays on the attractor") {
  const auto s = generate(spec_of(Task::Lorenz, 500, 1));
  for (const double x : s.values) CHECK(std::abs(x) < 30.0);
}

TEST_CASE("narma10 step with zero state") {
  const double zeros[10] = {};
  CHECK(narma10_step(zeros, 0.0, 0.0) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("narma10 series bounded in (0, 1) and matches the reference recurrence") {
  const auto spec = spec_of(Task::Narma10, 500, 1);
  const auto s = gen_narma10(spec);
  for (const double y : s.values) {
    CHECK(y > 0.0);
    CHECK(y < 1.0);
  }

  // Reference recurrence driven by the same substream.
  qrc::rng::Xoshiro256 gen(qrc::rng::derive_stream(spec.seed, 0));
  const std::size_t total = spec.narma.warmup + spec.length;
  std::vector<double> u(total);
  for (auto& v : u) v = gen.uniform(0.0, 0.5);
  std::vector<double> y(total, 0.0);
  for (std::size_t i = 9; i + 1 < total; ++i) {
    double sum = 0.0;
    for (int j = 9; j >= 0; --j) sum += y[i - j];  // oldest term first
    y[i + 1] = 0.3 * y[i] + 0.05 * y[i] * sum + 1.5 * u[i] * u[i - 9] + 0.1;
  }
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    CHECK(s.values[i] == y[spec.narma.warmup + i]);
  }
}

TEST_CASE("normalize_input") {
  TimeSeries raw;
  raw.values = {0.0, 2.0, 1.0, 3.0};

  SUBCASE("midpoint and clipping") {
    const auto n = normalize_input(raw, 2);  // prefix [0, 2]
    CHECK(n.values[0] == 0.0);
    CHECK(n.values[1] == 1.0);
    CHECK(n.values[2] == 0.5);
    CHECK(n.values[3] == 1.0);  // 3 clips to the prefix range
    CHECK(n.raw_min == 0.0);
    CHECK(n.raw_max == 2.0);
  }

  SUBCASE("constant prefix is rejected") {
    TimeSeries flat;
    flat.values = {1.0, 1.0, 2.0};
    CHECK_THROWS_AS(normalize_input(flat, 2), std::invalid_argument);
  }

  SUBCASE("prefix too short") {
    CHECK_THROWS_AS(normalize_input(raw, 1), std::invalid_argument);
  }
}

TEST_CASE("normalization anchors come from the prefix only") {
  const auto raw = generate(spec_of(Task::Lorenz, 400, 1));
  const int prefix = 280;
  const auto n = normalize_input(raw, prefix);

  double lo = raw.values[0], hi = raw.values[0];
  for (int i = 1; i < prefix; ++i) {
    lo = std::min(lo, raw.values[i]);
    hi = std::max(hi, raw.values[i]);
  }
  CHECK(n.raw_min == lo);
  CHECK(n.raw_max == hi);

  // Mapped prefix attains 0 and 1 and stays inside [0, 1].
  double plo = 1.0, phi = 0.0;
  for (int i = 0; i < prefix; ++i) {
    CHECK(n.values[i] >= 0.0);
    CHECK(n.values[i] <= 1.0);
    plo = std::min(plo, n.values[i]);
    phi = std::max(phi, n.values[i]);
  }
  CHECK(plo == 0.0);
  CHECK(phi == 1.0);
}

TEST_CASE("forecast pairs align input with next target") {
  TimeSeries s;
  s.values = {10.0, 20.0, 30.0};
  const auto pairs = make_forecast_pairs(s);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].input == 10.0);
  CHECK(pairs[0].target == 20.0);
  CHECK(pairs[1].input == 20.0);
  CHECK(pairs[1].target == 30.0);

  TimeSeries two;
  two.values = {1.0, 2.0};
  CHECK(make_forecast_pairs(two).size() == 1);

  TimeSeries one;
  one.values = {1.0};
  CHECK_THROWS_AS(make_forecast_pairs(one), std::invalid_argument);

  const auto long_series = generate(spec_of(Task::MackeyGlass, 333, 1));
  const auto long_pairs = make_forecast_pairs(long_series);
  CHECK(long_pairs.size() == 332);
  for (std::size_t t = 0; t < long_pairs.size(); ++t) {
    CHECK(long_pairs[t].target == long_series.values[t + 1]);
  }
}
