#include "qrc/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrc/rng.hpp"

namespace qrc::timeseries {

std::string to_string(Task t) {
  switch (t) {
    case Task::MackeyGlass: return "mackey_glass";
    case Task::Lorenz: return "lorenz";
    case Task::Narma10: return "narma10";
  }
  return "unknown";
}

Task task_from_string(const std::string& s) {
  if (s == "mackey_glass") return Task::MackeyGlass;
  if (s == "lorenz") return Task::Lorenz;
  if (s == "narma10") return Task::Narma10;
  throw std::invalid_argument("unknown task: " + s);
}

double mackey_glass_derivative(double x, double x_delayed, const MackeyGlassParams& p) {
  return p.beta * x_delayed / (1.0 + std::pow(x_delayed, p.exponent)) - p.gamma * x;
}

std::array<double, 3> lorenz_derivative(const std::array<double, 3>& s, const LorenzParams& p) {
  return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

std::array<double, 3> lorenz_rk4_step(const std::array<double, 3>& s, const LorenzParams& p) {
  const auto add = [](const std::array<double, 3>& a, const std::array<double, 3>& b,
                      double h) -> std::array<double, 3> {
    return {a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]};
  };
  const auto k1 = lorenz_derivative(s, p);
  const auto k2 = lorenz_derivative(add(s, k1, 0.5 * p.dt), p);
  const auto k3 = lorenz_derivative(add(s, k2, 0.5 * p.dt), p);
  const auto k4 = lorenz_derivative(add(s, k3, p.dt), p);
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = s[i] + p.dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

double narma10_step(const double* y_window, double u_t, double u_lag9) {
  const double y_t = y_window[9];
  double sum = 0.0;
  for (int i = 0; i < 10; ++i) sum += y_window[i];
  return 0.3 * y_t + 0.05 * y_t * sum + 1.5 * u_t * u_lag9 + 0.1;
}

namespace {

void require_positive_length(const SeriesSpec& spec) {
  if (spec.length <= 0) throw std::invalid_argument("series length must be positive");
}

void check_finite(double x, const char* task) {
  if (!std::isfinite(x)) throw std::runtime_error(std::string(task) + ": integrator diverged");
}

}  // namespace

TimeSeries gen_mackey_glass(const SeriesSpec& spec) {
  require_positive_length(spec);
  const auto& p = spec.mg;
  rng::Xoshiro256 gen(rng::derive_stream(spec.seed, 0));

  const int delay_steps = static_cast<int>(std::lround(p.tau / p.dt));
  const double x0 = 1.2 + gen.uniform(-0.1, 0.1);
  // Ring buffer over the delay line, constant initial history.
  std::vector<double> ring(static_cast<std::size_t>(delay_steps) + 1, x0);
  std::size_t head = 0;

  TimeSeries out;
  out.spec = spec;
  out.values.reserve(static_cast<std::size_t>(spec.length));
  const long total_emits = static_cast<long>(p.burn_in) + spec.length;
  double x = x0;
  for (long e = 0; e < total_emits; ++e) {
    for (int s = 0; s < p.subsample; ++s) {
      const double x_delayed = ring[head];
      x = x + p.dt * mackey_glass_derivative(x, x_delayed, p);
      ring[head] = x;
      head = (head + 1) % ring.size();
    }
    check_finite(x, "mackey_glass");
    if (e >= p.burn_in) out.values.push_back(x);
  }
  return out;
}

TimeSeries gen_lorenz(const SeriesSpec& spec) {
  require_positive_length(spec);
  const auto& p = spec.lorenz;
  rng::Xoshiro256 gen(rng::derive_stream(spec.seed, 0));

  std::array<double, 3> state = {1.0 + gen.uniform(-0.1, 0.1), 1.0 + gen.uniform(-0.1, 0.1),
                                 1.0 + gen.uniform(-0.1, 0.1)};
  TimeSeries out;
  out.spec = spec;
  out.values.reserve(static_cast<std::size_t>(spec.length));
  const long total_emits = static_cast<long>(p.burn_in) + spec.length;
  for (long e = 0; e < total_emits; ++e) {
    for (int s = 0; s < p.subsample; ++s) state = lorenz_rk4_step(state, p);
    check_finite(state[0], "lorenz");
    if (e >= p.burn_in) out.values.push_back(state[0]);
  }
  return out;
}

TimeSeries gen_narma10(const SeriesSpec& spec) {
  require_positive_length(spec);
  const auto& p = spec.narma;

  for (int attempt = 0; attempt <= p.max_restarts; ++attempt) {
    rng::Xoshiro256 gen(rng::derive_stream(spec.seed, static_cast<std::uint64_t>(attempt)));
    const std::size_t total = static_cast<std::size_t>(p.warmup) + spec.length;
    std::vector<double> u(total);
    for (auto& v : u) v = gen.uniform(p.input_lo, p.input_hi);

    std::vector<double> y(total, 0.0);
    bool diverged = false;
    for (std::size_t i = 9; i + 1 < total; ++i) {
      y[i + 1] = narma10_step(&y[i - 9], u[i], u[i - 9]);
      if (std::abs(y[i + 1]) > 10.0) {
        diverged = true;
        break;
      }
    }
    if (diverged) continue;

    TimeSeries out;
    out.spec = spec;
    out.values.assign(y.begin() + p.warmup, y.end());
    return out;
  }
  throw std::runtime_error("narma10: recurrence diverged after restarts");
}

TimeSeries generate(const SeriesSpec& spec) {
  switch (spec.task) {
    case Task::MackeyGlass: return gen_mackey_glass(spec);
    case Task::Lorenz: return gen_lorenz(spec);
    case Task::Narma10: return gen_narma10(spec);
  }
  throw std::invalid_argument("unknown task");
}

TimeSeries normalize_input(const TimeSeries& raw, int train_prefix_len) {
  if (train_prefix_len < 2) throw std::invalid_argument("normalization prefix too short");
  if (static_cast<std::size_t>(train_prefix_len) > raw.values.size()) {
    throw std::invalid_argument("normalization prefix exceeds series length");
  }
  double lo = raw.values[0];
  double hi = raw.values[0];
  for (int i = 1; i < train_prefix_len; ++i) {
    lo = std::min(lo, raw.values[i]);
    hi = std::max(hi, raw.values[i]);
  }
  if (hi - lo < 1e-12) throw std::invalid_argument("normalization prefix is constant");

  TimeSeries out;
  out.spec = raw.spec;
  out.raw_min = lo;
  out.raw_max = hi;
  out.normalized = true;
  out.values.resize(raw.values.size());
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    out.values[i] = std::clamp((raw.values[i] - lo) * inv, 0.0, 1.0);
  }
  return out;
}

std::vector<ForecastPair> make_forecast_pairs(const TimeSeries& series) {
  if (series.values.size() < 2) throw std::invalid_argument("series too short for forecasting");
  std::vector<ForecastPair> pairs;
  pairs.reserve(series.values.size() - 1);
  for (std::size_t t = 0; t + 1 < series.values.size(); ++t) {
    pairs.push_back({series.values[t], series.values[t + 1]});
  }
  return pairs;
}

}  // namespace qrc::timeseries
