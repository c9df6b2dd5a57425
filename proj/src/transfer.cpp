#include "esn/transfer.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "esn/error.hpp"

namespace esn {

namespace {

// tanh(x) = sum_k B_{2k} 4^k (4^k - 1) / (2k)! x^(2k-1), reduced to lowest terms.
constexpr std::array<double, kMaxTaylorOrder> kTanhSeries = {
    1.0,
    -1.0 / 3.0,
    2.0 / 15.0,
    -17.0 / 315.0,
    62.0 / 2835.0,
    -1382.0 / 155925.0,
    21844.0 / 6081075.0,
    -929569.0 / 638512875.0,
    6404582.0 / 10854718875.0,
    -443861162.0 / 1856156927625.0,
    18888466084.0 / 194896477400625.0,
    -113927491862.0 / 2900518163668125.0,
    58870668456604.0 / 3698160658676859375.0,
    -8374643517010684.0 / 1298054391195577640625.0,
    689005380505609448.0 / 263505041412702261046875.0,
    -129848163681107301953.0 / 122529844256906551386796875.0,
};

void check_order(int m) {
  if (m < 1 || m > kMaxTaylorOrder) {
    throw Error(ErrorKind::InvalidRange,
                "Taylor order must be in [1, " + std::to_string(kMaxTaylorOrder) +
                    "], got " + std::to_string(m));
  }
}

double taylor_eval(int m, double x) noexcept {
  const double x2 = x * x;
  double acc = kTanhSeries[static_cast<std::size_t>(m - 1)];
  for (int k = m - 2; k >= 0; --k) acc = acc * x2 + kTanhSeries[static_cast<std::size_t>(k)];
  return acc * x;
}

}  // namespace

TransferSpec TransferSpec::taylor(int order) {
  check_order(order);
  return TransferSpec(Kind::Taylor, order);
}

TransferSpec TransferSpec::parse(std::string_view token) {
  if (token == "tanh") return tanh();
  constexpr std::string_view prefix = "taylor:";
  if (token.starts_with(prefix)) {
    const auto digits = token.substr(prefix.size());
    int m = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return taylor(m);
    }
  }
  throw Error(ErrorKind::ConfigError,
              "unrecognised transfer token '" + std::string(token) + "' (want tanh or taylor:<m>)");
}

std::string TransferSpec::token() const {
  return is_tanh() ? std::string("tanh") : "taylor:" + std::to_string(order_);
}

double TransferSpec::operator()(double x) const noexcept {
  return is_tanh() ? std::tanh(x) : taylor_eval(order_, x);
}

void TransferSpec::apply(std::span<double> values) const noexcept {
  if (is_tanh()) {
    for (double& v : values) v = std::tanh(v);
  } else if (order_ > 1) {
    for (double& v : values) v = taylor_eval(order_, v);
  }
}

std::vector<double> taylor_coefficients(int m) {
  check_order(m);
  return {kTanhSeries.begin(), kTanhSeries.begin() + m};
}

double eval(const TransferSpec& spec, double x) noexcept { return spec(x); }

double rmse_to_tanh(int m, int grid_points) {
  check_order(m);
  if (grid_points < 2) {
    throw Error(ErrorKind::InvalidArgument, "rmse_to_tanh needs at least 2 grid points");
  }
  const double step = 2.0 / static_cast<double>(grid_points - 1);
  double sum = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x = -1.0 + step * static_cast<double>(i);
    const double d = taylor_eval(m, x) - std::tanh(x);
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(grid_points));
}

}  // namespace esn
