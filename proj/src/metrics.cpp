#include "esn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "esn/error.hpp"

namespace esn {

namespace {

void check_pair(std::span<const double> y, std::span<const double> y_hat, std::size_t min_len) {
  if (y.size() != y_hat.size() || y.size() < min_len) {
    std::ostringstream msg;
    msg << "sequences must have equal length >= " << min_len << ", got " << y.size() << " and " << y_hat.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

/// Rounding leaves a tiny nonzero variance on constant data, so test directly.
bool is_constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [first = v.front()](double x) { return x == first; });
}

bool degenerate_variance(std::span<const double> v, double variance) {
  return variance < kDegenerateVariance || is_constant(v);
}

std::span<const double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
  return {m.col(c).data(), static_cast<std::size_t>(m.rows())};
}

}  // namespace

double capacity(std::span<const double> y, std::span<const double> y_hat, bool* degenerate) {
  check_pair(y, y_hat, 2);
  const double my = mean(y);
  const double mh = mean(y_hat);
  double cov = 0.0;
  double vy = 0.0;
  double vh = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const double a = y[t] - my;
    const double b = y_hat[t] - mh;
    cov += a * b;
    vy += a * a;
    vh += b * b;
  }
  const double n = static_cast<double>(y.size());
  cov /= n;
  vy /= n;
  vh /= n;
  const bool flat = degenerate_variance(y, vy) || degenerate_variance(y_hat, vh);
  if (degenerate != nullptr) *degenerate = flat;
  if (flat) return 0.0;
  return (cov / vy) * (cov / vh);
}

CapacityProfile total_capacity(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    std::ostringstream msg;
    msg << "outputs are " << outputs.rows() << "x" << outputs.cols() << " but targets are " << targets.rows() << "x"
        << targets.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  CapacityProfile profile;
  profile.per_delay.reserve(static_cast<std::size_t>(outputs.cols()));
  for (Eigen::Index k = 0; k < outputs.cols(); ++k) {
    bool flat = false;
    const double c = capacity(column(outputs, k), column(targets, k), &flat);
    if (flat) ++profile.degenerate_columns;
    profile.per_delay.emplace_back(static_cast<int>(k + 1), c);
    profile.total += c;
  }
  return profile;
}

std::string_view to_string(NmseConvention convention) noexcept {
  return convention == NmseConvention::Paper ? "paper" : "standard";
}

NmseConvention parse_nmse_convention(std::string_view name) {
  if (name == "paper") return NmseConvention::Paper;
  if (name == "standard") return NmseConvention::Standard;
  throw Error(ErrorKind::ConfigError, "unknown nmse convention '" + std::string(name) + "' (want paper or standard)");
}

double nmse(std::span<const double> y, std::span<const double> y_hat, NmseConvention convention) {
  check_pair(y, y_hat, 1);
  const double var = population_variance(y_hat);
  if (degenerate_variance(y_hat, var)) throw Error(ErrorKind::DegenerateVariance, "target variance is zero");
  double sq = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) sq += (y[t] - y_hat[t]) * (y[t] - y_hat[t]);
  const double mse = sq / static_cast<double>(y.size());
  return (convention == NmseConvention::Paper ? std::sqrt(mse) : mse) / var;
}

}  // namespace esn
