#include "esn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esn/error.hpp"

namespace esn {

namespace {

void check_lengths(int length, int tau_max) {
  if (tau_max < 1 || length <= tau_max) {
    throw Error(ErrorKind::InvalidArgument, "need length > tau_max >= 1, got length " + std::to_string(length) +
                                                ", tau_max " + std::to_string(tau_max));
  }
}

/// Column tau-1 = g(u(t - tau)), zero-padded.
template <typename Fn>
Eigen::MatrixXd delayed_targets(std::span<const double> u, int tau_max, Fn g) {
  const auto length = static_cast<Eigen::Index>(u.size());
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(length, tau_max);
  for (int tau = 1; tau <= tau_max; ++tau)
    for (Eigen::Index t = tau; t < length; ++t) y(t, tau - 1) = g(u[static_cast<std::size_t>(t - tau)]);
  return y;
}

std::vector<std::string> delay_labels(int tau_max) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(tau_max));
  for (int tau = 1; tau <= tau_max; ++tau) labels.push_back("tau=" + std::to_string(tau));
  return labels;
}

bool is_whole_multiple(double value, double step) {
  const double ratio = value / step;
  return std::abs(ratio - std::round(ratio)) < 1e-9 && std::round(ratio) >= 1.0;
}

}  // namespace

std::string_view to_string(TaskKind kind) noexcept {
  switch (kind) {
    case TaskKind::Memory: return "memory";
    case TaskKind::Legendre: return "legendre3";
    case TaskKind::MackeyGlass: return "mackey-glass";
    case TaskKind::Narma10: return "narma10";
  }
  return "unknown";
}

TaskKind parse_task(std::string_view name) {
  if (name == "memory") return TaskKind::Memory;
  if (name == "legendre3") return TaskKind::Legendre;
  if (name == "mackey-glass") return TaskKind::MackeyGlass;
  if (name == "narma10") return TaskKind::Narma10;
  throw Error(ErrorKind::ConfigError, "unknown task '" + std::string(name) +
                                          "' (want memory, legendre3, mackey-glass or narma10)");
}

Eigen::MatrixXd memory_targets(std::span<const double> input, int tau_max) {
  if (tau_max < 1) throw Error(ErrorKind::InvalidArgument, "tau_max must be >= 1");
  return delayed_targets(input, tau_max, [](double u) { return u; });
}

Eigen::MatrixXd legendre_targets(std::span<const double> input, int order, int tau_max) {
  if (tau_max < 1) throw Error(ErrorKind::InvalidArgument, "tau_max must be >= 1");
  if (order < 0 || order > 10) throw Error(ErrorKind::InvalidRange, "Legendre order must be in [0, 10]");
  return delayed_targets(input, tau_max, [order](double u) { return legendre_target(order, u); });
}

TaskInstance gen_memory(RandomSource& src, int length, int tau_max) {
  check_lengths(length, tau_max);
  TaskInstance task;
  task.kind = TaskKind::Memory;
  task.input.resize(static_cast<std::size_t>(length));
  for (double& u : task.input) u = src.uniform(-0.5, 0.5);
  task.targets = memory_targets(task.input, tau_max);
  task.target_labels = delay_labels(tau_max);
  return task;
}

double legendre_target(int n, double u) {
  if (n < 0 || n > 10) throw Error(ErrorKind::InvalidRange, "Legendre order must be in [0, 10]");
  double sum = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= n; ++k) {
    sum += binom * binom * std::pow(u - 1.0, n - k) * std::pow(u + 1.0, k);
    binom = binom * static_cast<double>(n - k) / static_cast<double>(k + 1);
  }
  return std::ldexp(sum, -n);
}

TaskInstance gen_legendre(RandomSource& src, int length, int order, int tau_max) {
  check_lengths(length, tau_max);
  TaskInstance task;
  task.kind = TaskKind::Legendre;
  task.input.resize(static_cast<std::size_t>(length));
  for (double& u : task.input) u = src.uniform(-1.0, 1.0);
  task.targets = legendre_targets(task.input, order, tau_max);
  task.target_labels = delay_labels(tau_max);
  return task;
}

std::vector<double> integrate_mackey_glass(int length, const MackeyGlassParams& p, RandomSource& src) {
  if (length <= 0 || p.transient <= 0) {
    throw Error(ErrorKind::InvalidArgument, "Mackey-Glass length and transient must be positive");
  }
  if (!(p.step > 0.0) || !is_whole_multiple(p.delay, p.step) || !is_whole_multiple(p.sample_interval, p.step)) {
    std::ostringstream msg;
    msg << "step " << p.step << " must divide both the delay " << p.delay << " and the sample interval "
        << p.sample_interval;
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  const auto lag = static_cast<std::size_t>(std::lround(p.delay / p.step));
  const auto per_sample = static_cast<std::size_t>(std::lround(p.sample_interval / p.step));
  const std::size_t samples = static_cast<std::size_t>(p.transient) + static_cast<std::size_t>(length);
  const std::size_t steps = samples * per_sample;
  const double h = p.step;

  const double start = p.history + (p.history_jitter > 0.0 ? src.uniform(-p.history_jitter, p.history_jitter) : 0.0);

  auto rhs = [&p](double x, double x_delayed) {
    return p.beta * x_delayed / (1.0 + std::pow(x_delayed, p.exponent)) - p.gamma * x;
  };

  // Index i holds x at time (i - lag) * h; indices 0..lag are the history.
  // slope_right(i) is dx/dt just after point i, slope_left(i) just before it;
  // they differ only at t = 0 where the constant history meets the solution.
  std::vector<double> x(lag + steps + 1, start);
  std::vector<double> slope_left(x.size(), 0.0);
  std::vector<double> slope_right(x.size(), 0.0);
  slope_right[lag] = rhs(start, start);

  for (std::size_t i = lag; i < lag + steps; ++i) {
    const std::size_t j = i - lag;
    const double d0 = x[j];
    const double d1 = x[j + 1];
    const double d_mid = 0.5 * (d0 + d1) + 0.125 * h * (slope_right[j] - slope_left[j + 1]);
    const double xi = x[i];
    const double k1 = rhs(xi, d0);
    const double k2 = rhs(xi + 0.5 * h * k1, d_mid);
    const double k3 = rhs(xi + 0.5 * h * k2, d_mid);
    const double k4 = rhs(xi + h * k3, d1);
    const double next = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(next)) {
      throw Error(ErrorKind::IntegrationFailure, "Mackey-Glass integration diverged at step " + std::to_string(j));
    }
    x[i + 1] = next;
    slope_left[i + 1] = slope_right[i + 1] = rhs(next, x[i + 1 - lag]);
  }

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(length));
  for (std::size_t s = static_cast<std::size_t>(p.transient) + 1; s <= samples; ++s) out.push_back(x[lag + s * per_sample]);
  return out;
}

TaskInstance gen_mackey_glass(RandomSource& src, int length, int horizon, const MackeyGlassParams& params) {
  if (length < 2 || horizon < 0) {
    throw Error(ErrorKind::InvalidArgument, "Mackey-Glass task needs length >= 2 and horizon >= 0");
  }
  std::vector<double> series = integrate_mackey_glass(length + horizon, params, src);
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  if (!(span > 0.0)) throw Error(ErrorKind::IntegrationFailure, "Mackey-Glass series is constant; cannot scale");
  for (double& s : series) s = 0.5 * (s - lo) / span;

  TaskInstance task;
  task.kind = TaskKind::MackeyGlass;
  task.input.assign(series.begin(), series.begin() + length);
  task.targets.resize(length, 1);
  for (int t = 0; t < length; ++t) task.targets(t, 0) = series[static_cast<std::size_t>(t + horizon)];
  task.target_labels = {"horizon=" + std::to_string(horizon)};
  return task;
}

std::vector<double> narma10_series(std::span<const double> u) {
  constexpr std::size_t order = 10;
  std::vector<double> y(u.size(), 0.0);
  for (std::size_t t = order; t < u.size(); ++t) {
    double window = 0.0;
    for (std::size_t i = 1; i <= order; ++i) window += y[t - i];
    y[t] = 0.3 * y[t - 1] + 0.05 * y[t - 1] * window + 1.5 * u[t - order] * u[t - 1] + 0.1;
  }
  return y;
}

TaskInstance gen_narma10(RandomSource& src, int length) {
  if (length <= 10) throw Error(ErrorKind::InvalidArgument, "NARMA10 needs length > 10");
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    RandomSource retry = src.derive("narma-retry/" + std::to_string(attempt));
    RandomSource& stream = attempt == 0 ? src : retry;
    std::vector<double> u(static_cast<std::size_t>(length));
    for (double& value : u) value = stream.uniform(0.0, 0.5);
    const std::vector<double> y = narma10_series(u);
    const bool bounded = std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v) && std::abs(v) <= 1.0; });
    if (!bounded) continue;

    TaskInstance task;
    task.kind = TaskKind::Narma10;
    task.input = std::move(u);
    task.targets = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
    task.target_labels = {"narma10"};
    return task;
  }
  throw Error(ErrorKind::RegenerationExhausted,
              "NARMA10 output left [-1, 1] in " + std::to_string(kMaxAttempts) + " realizations");
}

}  // namespace esn
