#include "esn/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "esn/error.hpp"

namespace esn {

namespace {

void check_size(int n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "reservoir size must be >= 2, got " + std::to_string(n));
}

void check_radius(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    std::ostringstream msg;
    msg << "spectral radius must be positive and finite, got " << lambda;
    throw Error(ErrorKind::InvalidRange, msg.str());
  }
}

bool is_lower_ring(const Eigen::MatrixXd& w, double r) {
  const Eigen::Index n = w.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double expected = (j == (i + n - 1) % n) ? r : 0.0;
      if (w(i, j) != expected) return false;
    }
  }
  return true;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& block) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(block);
  return qr.householderQ() * Eigen::MatrixXd::Identity(block.rows(), block.cols());
}

struct RitzEstimate {
  double magnitude;
  /// ||M y - theta y|| / ||y|| for the Ritz pair behind `magnitude`.
  double residual;
};

/// Largest-magnitude Ritz value of the block q, with z = m q.
RitzEstimate largest_ritz(const Eigen::MatrixXd& q, const Eigen::MatrixXd& z) {
  const Eigen::MatrixXd projected = q.transpose() * z;
  if (projected.rows() == 1) {
    const double theta = projected(0, 0);
    return {std::abs(theta), (z.col(0) - theta * q.col(0)).norm()};
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(projected, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SpectralEstimateFailure, "Ritz eigenvalue problem did not converge");
  }
  Eigen::Index lead = 0;
  solver.eigenvalues().cwiseAbs().maxCoeff(&lead);
  const std::complex<double> theta = solver.eigenvalues()(lead);
  const Eigen::VectorXcd s = solver.eigenvectors().col(lead);
  const Eigen::VectorXcd r = z.cast<std::complex<double>>() * s - theta * (q.cast<std::complex<double>>() * s);
  return {std::abs(theta), r.norm() / s.norm()};
}

}  // namespace

std::string_view to_string(Topology topology) noexcept {
  switch (topology) {
    case Topology::SimpleCycle: return "scr";
    case Topology::GaussianOrthogonal: return "goe";
    case Topology::DenseGaussian: return "dense";
  }
  return "unknown";
}

Topology parse_topology(std::string_view name) {
  if (name == "scr") return Topology::SimpleCycle;
  if (name == "goe") return Topology::GaussianOrthogonal;
  if (name == "dense") return Topology::DenseGaussian;
  throw Error(ErrorKind::ConfigError, "unknown topology '" + std::string(name) + "' (want scr, goe or dense)");
}

Reservoir::Reservoir(Eigen::MatrixXd weights, Eigen::VectorXd input_weights, double spectral_radius,
                     Topology topology)
    : weights_(std::move(weights)),
      input_weights_(std::move(input_weights)),
      spectral_radius_(spectral_radius),
      topology_(topology) {
  if (weights_.rows() != weights_.cols() || weights_.rows() != input_weights_.size()) {
    std::ostringstream msg;
    msg << "reservoir weights are " << weights_.rows() << "x" << weights_.cols() << " but input weights have "
        << input_weights_.size() << " entries";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (weights_.rows() < 1) throw Error(ErrorKind::InvalidArgument, "empty reservoir");
  if (!weights_.allFinite() || !input_weights_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "reservoir weights must be finite");
  }
  if (topology_ == Topology::SimpleCycle) {
    check_size(size());
    if (!is_lower_ring(weights_, std::abs(spectral_radius_))) {
      throw Error(ErrorKind::InvalidArgument, "simple-cycle reservoir weights are not a uniform lower ring");
    }
  }
}

Eigen::MatrixXd build_simple_cycle(int n, double lambda) {
  check_size(n);
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    std::ostringstream msg;
    msg << "simple-cycle radius must lie in (0, 1], got " << lambda;
    throw Error(ErrorKind::InvalidRange, msg.str());
  }
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) w(i, (i + n - 1) % n) = lambda;
  return w;
}

Eigen::MatrixXd sample_dense_gaussian(int n, RandomSource& src) {
  check_size(n);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = src.gaussian();
  return a;
}

Eigen::MatrixXd sample_gaussian_orthogonal(int n, RandomSource& src) {
  const Eigen::MatrixXd a = sample_dense_gaussian(n, src);
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = a(i, j) + a(j, i);
  return sym;
}

Eigen::MatrixXd rescale_to_radius(const Eigen::MatrixXd& raw, double estimate, double lambda) {
  check_radius(lambda);
  if (!(estimate > 0.0)) {
    throw Error(ErrorKind::InvalidRange, "cannot rescale a matrix with zero spectral radius");
  }
  return (lambda / estimate) * raw;
}

Eigen::MatrixXd build_gaussian_orthogonal(int n, double lambda, RandomSource& src) {
  check_radius(lambda);
  const Eigen::MatrixXd raw = sample_gaussian_orthogonal(n, src);
  return rescale_to_radius(raw, spectral_radius_estimate(raw), lambda);
}

Eigen::MatrixXd build_dense_gaussian(int n, double lambda, RandomSource& src) {
  check_radius(lambda);
  const Eigen::MatrixXd raw = sample_dense_gaussian(n, src);
  return rescale_to_radius(raw, spectral_radius_estimate(raw), lambda);
}

Eigen::VectorXd build_input_weights(int n, double v, RandomSource& src) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "input weight count must be positive");
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidRange, "input weight coefficient must be non-negative");
  }
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = v * src.bernoulli_sign();
  return w;
}

double spectral_radius_estimate(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "spectral radius needs a non-empty square matrix");
  }
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");

  constexpr int kMaxSweeps = 10000;
  constexpr int kStableSweeps = 3;
  constexpr double kTolerance = 1e-11;
  constexpr double kResidualTolerance = 1e-6;

  const Eigen::Index n = m.rows();
  const Eigen::Index block = std::min<Eigen::Index>(n, 8);

  // Fixed start block so the estimate is a deterministic function of m.
  RandomSource start(0x5eed5eed5eedULL);
  Eigen::MatrixXd q(n, block);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < block; ++j) q(i, j) = start.gaussian();
  q = orthonormal_columns(q);

  double prev_ritz = -1.0;
  double prev_growth = -1.0;
  int ritz_streak = 0;
  int growth_streak = 0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const Eigen::MatrixXd z = m * q;
    const double growth = z.col(0).norm();
    if (sweep == 0 && z.norm() == 0.0) return 0.0;
    const RitzEstimate estimate = largest_ritz(q, z);
    const double ritz = estimate.magnitude;

    // A Ritz value can be stationary without being an eigenvalue (for a ring
    // the projection never changes), so it also needs a small residual.
    const bool ritz_settled = std::abs(ritz - prev_ritz) <= kTolerance * ritz &&
                              estimate.residual <= kResidualTolerance * ritz;
    ritz_streak = ritz_settled ? ritz_streak + 1 : 0;
    growth_streak = std::abs(growth - prev_growth) <= kTolerance * growth ? growth_streak + 1 : 0;
    if (ritz_streak >= kStableSweeps) return ritz;
    if (growth_streak >= kStableSweeps) return growth;
    prev_ritz = ritz;
    prev_growth = growth;
    q = orthonormal_columns(z);
  }
  throw Error(ErrorKind::SpectralEstimateFailure,
              "orthogonal iteration did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
}

StateTrajectory drive(const Reservoir& reservoir, const TransferSpec& spec, std::span<const double> input,
                      int washout) {
  return drive(reservoir, spec, input, washout, Eigen::VectorXd::Zero(reservoir.size()));
}

StateTrajectory drive(const Reservoir& reservoir, const TransferSpec& spec, std::span<const double> input,
                      int washout, const Eigen::VectorXd& initial_state) {
  const int n = reservoir.size();
  if (initial_state.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "initial state has " + std::to_string(initial_state.size()) +
                                                  " entries for a reservoir of size " + std::to_string(n));
  }
  const auto steps = static_cast<int>(input.size());
  if (washout < 0 || washout >= steps) {
    throw Error(ErrorKind::InvalidArgument, "washout " + std::to_string(washout) +
                                                " must lie in [0, input length " + std::to_string(steps) + ")");
  }
  for (double u : input) {
    if (!std::isfinite(u)) throw Error(ErrorKind::InvalidArgument, "input contains non-finite values");
  }

  StateTrajectory out;
  out.washout_dropped = washout;
  out.states.resize(steps - washout, n + 1);
  out.states.col(n).setOnes();

  const Eigen::MatrixXd& w = reservoir.weights();
  const Eigen::VectorXd& w_in = reservoir.input_weights();
  const bool ring = reservoir.topology() == Topology::SimpleCycle;
  const double ring_weight = ring ? w(1, 0) : 0.0;

  Eigen::VectorXd x = initial_state;
  Eigen::VectorXd pre(n);
  double max_abs = 0.0;
  for (int t = 0; t < steps; ++t) {
    if (ring) {
      pre(0) = ring_weight * x(n - 1);
      pre.tail(n - 1) = ring_weight * x.head(n - 1);
    } else {
      pre.noalias() = w * x;
    }
    pre += w_in * input[static_cast<std::size_t>(t)];
    spec.apply(std::span<double>(pre.data(), static_cast<std::size_t>(n)));
    x.swap(pre);

    max_abs = std::max(max_abs, x.cwiseAbs().maxCoeff());
    if (!x.allFinite() || !(max_abs <= kStateOverflowLimit)) {
      std::ostringstream msg;
      msg << "state magnitude " << max_abs << " exceeded " << kStateOverflowLimit << " at step " << t
          << " with transfer " << spec.token();
      throw Error(ErrorKind::StateOverflow, msg.str());
    }
    if (t >= washout) out.states.row(t - washout).head(n) = x.transpose();
  }
  out.max_abs_state = max_abs;
  return out;
}

}  // namespace esn
