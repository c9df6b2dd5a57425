#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace esn {

/// Below this, a variance is treated as zero. Exactly constant data is
/// degenerate regardless of its computed variance.
inline constexpr double kDegenerateVariance = 1e-300;

/// Squared Pearson correlation Cov^2 / (Var y Var y_hat), population moments.
/// A constant argument carries no signal: the result is 0 and `degenerate`
/// (if given) is set.
double capacity(std::span<const double> y, std::span<const double> y_hat, bool* degenerate = nullptr);

struct CapacityProfile {
  std::vector<std::pair<int, double>> per_delay;
  double total = 0.0;
  int degenerate_columns = 0;
};

/// Column-wise capacity, summed. Column k is labelled with delay k + 1.
CapacityProfile total_capacity(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets);

enum class NmseConvention {
  /// sqrt(mean squared error) / Var(target), as printed with the benchmarks.
  Paper,
  /// mean squared error / Var(target).
  Standard,
};

std::string_view to_string(NmseConvention convention) noexcept;
NmseConvention parse_nmse_convention(std::string_view name);

/// `y` is the network output, `y_hat` the target. Throws DegenerateVariance
/// when the target is constant.
double nmse(std::span<const double> y, std::span<const double> y_hat,
            NmseConvention convention = NmseConvention::Paper);

}  // namespace esn
