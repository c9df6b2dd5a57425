#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "esn/rng.hpp"

namespace esn {

enum class TaskKind { Memory, Legendre, MackeyGlass, Narma10 };

/// Config names: "memory", "legendre3", "mackey-glass", "narma10".
std::string_view to_string(TaskKind kind) noexcept;
TaskKind parse_task(std::string_view name);

/// Input sequence and aligned targets. Row t of `targets` depends only on
/// input[0..t].
struct TaskInstance {
  std::vector<double> input;
  Eigen::MatrixXd targets;
  std::vector<std::string> target_labels;
  TaskKind kind = TaskKind::Memory;
};

/// Column tau-1 holds u(t - tau) for tau = 1..tau_max, zero where t < tau.
Eigen::MatrixXd memory_targets(std::span<const double> input, int tau_max);

/// Column tau-1 holds P_n(u(t - tau)), zero where t < tau.
Eigen::MatrixXd legendre_targets(std::span<const double> input, int order, int tau_max);

/// Input i.i.d. U[-0.5, 0.5); column tau-1 holds u(t - tau) for tau = 1..tau_max,
/// zero where t < tau.
TaskInstance gen_memory(RandomSource& src, int length, int tau_max);

/// Shifted-Legendre-style sum (1/2^n) sum_k C(n,k)^2 (u-1)^(n-k) (u+1)^k,
/// which equals the Legendre polynomial P_n(u). Requires 0 <= n <= 10.
double legendre_target(int n, double u);

/// Input i.i.d. U[-1, 1); column tau-1 holds P_n(u(t - tau)), zero where t < tau.
TaskInstance gen_legendre(RandomSource& src, int length, int order, int tau_max);

struct MackeyGlassParams {
  double step = 0.1;
  double beta = 0.2;
  double gamma = 0.1;
  double exponent = 10.0;
  double delay = 17.0;
  /// Samples discarded before output starts.
  int transient = 1000;
  double sample_interval = 1.0;
  /// Constant initial history, offset once by U(-jitter, jitter).
  double history = 1.2;
  double history_jitter = 0.01;
};

/// RK4 integration of dx/dt = beta x(t-d) / (1 + x(t-d)^n) - gamma x(t).
///
/// The delay must be a whole number of steps, so delayed values at step
/// boundaries are read straight from the stored trajectory. The midpoint
/// stages need x(t - d + h/2), which comes from cubic Hermite interpolation
/// between the two neighbouring stored points and their derivatives; this
/// keeps the scheme fourth order (a linear midpoint would drop it to second).
///
/// Returns `length` samples spaced `sample_interval` apart, after `transient`
/// samples have been dropped. Throws IntegrationFailure on non-finite values.
std::vector<double> integrate_mackey_glass(int length, const MackeyGlassParams& params, RandomSource& src);

/// Min-max scales a fresh series of length + horizon samples onto [0, 0.5];
/// input is s(t), the single target is s(t + horizon).
TaskInstance gen_mackey_glass(RandomSource& src, int length, int horizon, const MackeyGlassParams& params = {});

/// NARMA10 output for a given input, y(t) = 0 for t < 10 and
/// y(t) = 0.3 y(t-1) + 0.05 y(t-1) sum_{i=1..10} y(t-i) + 1.5 u(t-10) u(t-1) + 0.1.
std::vector<double> narma10_series(std::span<const double> input);

/// Input i.i.d. U[0, 0.5). A realization with any |y| > 1 (or non-finite y)
/// is redrawn from a derived stream, up to 100 attempts in total.
TaskInstance gen_narma10(RandomSource& src, int length);

}  // namespace esn
