#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace esn {

/// Largest Taylor order with hard-coded coefficients.
inline constexpr int kMaxTaylorOrder = 16;

/// Node nonlinearity: the tanh series truncated to `order` odd terms, or
/// tanh itself. Order 1 is the identity, i.e. the linear reservoir.
class TransferSpec {
 public:
  enum class Kind { Taylor, Tanh };

  static TransferSpec taylor(int order);
  static TransferSpec linear() { return taylor(1); }
  static TransferSpec tanh() { return TransferSpec(Kind::Tanh, 0); }

  /// Accepts "tanh" or "taylor:<m>".
  static TransferSpec parse(std::string_view token);

  Kind kind() const noexcept { return kind_; }
  bool is_tanh() const noexcept { return kind_ == Kind::Tanh; }
  /// Taylor order m; 0 for tanh.
  int order() const noexcept { return order_; }

  std::string token() const;

  double operator()(double x) const noexcept;

  /// In-place element-wise application.
  void apply(std::span<double> values) const noexcept;

  /// Canonical ordering for output: Taylor orders ascending, tanh last.
  friend bool operator<(const TransferSpec& a, const TransferSpec& b) noexcept {
    return a.sort_key() < b.sort_key();
  }
  friend bool operator==(const TransferSpec& a, const TransferSpec& b) noexcept = default;

 private:
  TransferSpec(Kind kind, int order) : kind_(kind), order_(order) {}
  int sort_key() const noexcept { return is_tanh() ? kMaxTaylorOrder + 1 : order_; }

  Kind kind_;
  int order_;
};

/// Coefficient of x^(2k-1) for k = 1..m. Throws InvalidRange outside 1..16.
std::vector<double> taylor_coefficients(int m);

double eval(const TransferSpec& spec, double x) noexcept;

/// RMSE of the order-m expansion against tanh on `grid_points` uniform points
/// spanning [-1, 1] inclusive.
double rmse_to_tanh(int m, int grid_points = 1001);

}  // namespace esn
