#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qrc::timeseries {

enum class Task { MackeyGlass, Lorenz, Narma10 };

std::string to_string(Task t);
Task task_from_string(const std::string& s);

struct MackeyGlassParams {
  double beta = 0.2;
  double gamma = 0.1;
  double exponent = 10.0;
  double tau = 17.0;
  double dt = 0.1;
  int subsample = 10;  // integrator steps per emitted sample
  int burn_in = 1000;  // emitted samples discarded
};

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double dt = 0.01;
  int subsample = 5;  // integrator steps per emitted x sample
  int burn_in = 500;
};

struct Narma10Params {
  double input_lo = 0.0;
  double input_hi = 0.5;
  int warmup = 50;        // recurrence steps discarded
  int max_restarts = 3;   // substream restarts on divergence
};

struct SeriesSpec {
  Task task = Task::MackeyGlass;
  int length = 0;  // emitted sample count
  std::uint64_t seed = 0;
  MackeyGlassParams mg{};
  LorenzParams lorenz{};
  Narma10Params narma{};
};

struct TimeSeries {
  std::vector<double> values;
  bool normalized = false;
  double raw_min = 0.0;  // anchors fitted on the training prefix
  double raw_max = 0.0;
  SeriesSpec spec{};
};

struct ForecastPair {
  double input;
  double target;
};

/// Single-step primitives, exposed so the integrators can be checked
/// directly against their analytic fixed points.
double mackey_glass_derivative(double x, double x_delayed, const MackeyGlassParams& p);
std::array<double, 3> lorenz_derivative(const std::array<double, 3>& s, const LorenzParams& p);
std::array<double, 3> lorenz_rk4_step(const std::array<double, 3>& s, const LorenzParams& p);
/// y_window holds y_{t-9}..y_t (oldest first).
double narma10_step(const double* y_window, double u_t, double u_lag9);

TimeSeries gen_mackey_glass(const SeriesSpec& spec);
TimeSeries gen_lorenz(const SeriesSpec& spec);
TimeSeries gen_narma10(const SeriesSpec& spec);

/// Dispatch on spec.task.
TimeSeries generate(const SeriesSpec& spec);

/// Min-max map fitted on the first train_prefix_len samples, applied to the
/// whole series; values outside the fitted range clip to [0, 1].
TimeSeries normalize_input(const TimeSeries& raw, int train_prefix_len);

/// One-step-ahead pairs (u_t, y_{t+1}); a series of S samples yields S-1 pairs.
std::vector<ForecastPair> make_forecast_pairs(const TimeSeries& series);

}  // namespace qrc::timeseries
