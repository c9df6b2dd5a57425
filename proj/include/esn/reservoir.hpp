#pragma once

#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "esn/rng.hpp"
#include "esn/transfer.hpp"

namespace esn {

enum class Topology { SimpleCycle, GaussianOrthogonal, DenseGaussian };

/// Config names: "scr", "goe", "dense".
std::string_view to_string(Topology topology) noexcept;
Topology parse_topology(std::string_view name);

/// Fixed recurrent core: weights (N x N), input weights (N), declared radius.
class Reservoir {
 public:
  /// Validates shapes. A SimpleCycle reservoir must actually be the lower
  /// ring with every ring weight equal to |spectral_radius|, since `drive`
  /// exploits that structure.
  Reservoir(Eigen::MatrixXd weights, Eigen::VectorXd input_weights, double spectral_radius,
            Topology topology);

  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& input_weights() const noexcept { return input_weights_; }
  double spectral_radius() const noexcept { return spectral_radius_; }
  Topology topology() const noexcept { return topology_; }
  int size() const noexcept { return static_cast<int>(input_weights_.size()); }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd input_weights_;
  double spectral_radius_;
  Topology topology_;
};

/// Washed-out states, one row per kept time step, with a trailing bias
/// column of ones.
struct StateTrajectory {
  Eigen::MatrixXd states;
  int washout_dropped = 0;
  /// Largest |x_i(t)| over every driven step, washout included.
  double max_abs_state = 0.0;

  int rows() const noexcept { return static_cast<int>(states.rows()); }
  int width() const noexcept { return static_cast<int>(states.cols()); }
};

/// Ring with Omega(i, i-1 mod N) = lambda. No rescaling is needed: the ring
/// is lambda times a permutation, so its spectral radius is exactly lambda.
Eigen::MatrixXd build_simple_cycle(int n, double lambda);

/// A + A^T with A i.i.d. N(0, 1), rescaled to spectral radius lambda.
Eigen::MatrixXd build_gaussian_orthogonal(int n, double lambda, RandomSource& src);

/// I.i.d. N(0, 1) entries rescaled to spectral radius lambda.
Eigen::MatrixXd build_dense_gaussian(int n, double lambda, RandomSource& src);

/// Entries are +v or -v with independent fair signs.
Eigen::VectorXd build_input_weights(int n, double v, RandomSource& src);

/// Unscaled draws behind the GOE and dense builders, exposed so a sweep can
/// sample once per seed and rescale for each lambda. Entries are filled in
/// row-major order.
Eigen::MatrixXd sample_gaussian_orthogonal(int n, RandomSource& src);
Eigen::MatrixXd sample_dense_gaussian(int n, RandomSource& src);

/// (lambda / estimate) * raw. Throws InvalidRange unless lambda > 0 and
/// estimate > 0.
Eigen::MatrixXd rescale_to_radius(const Eigen::MatrixXd& raw, double estimate, double lambda);

/// Largest eigenvalue magnitude.
///
/// Orthogonal iteration on a block of min(N, 8) vectors. Each sweep yields
/// two estimates: the largest Ritz value magnitude of the projected block,
/// which resolves complex or +/- dominant pairs, and the growth of the lead
/// vector, which is exact for scaled orthogonal matrices such as the ring
/// where all eigenvalues share one magnitude and Ritz values never settle.
/// A Ritz value counts as stable only once its Ritz pair has a relative
/// residual below 1e-6. Whichever estimate stabilises first is returned. Throws
/// SpectralEstimateFailure after 10^4 sweeps without convergence.
double spectral_radius_estimate(const Eigen::MatrixXd& m);

/// Threshold on |x_i(t)| beyond which `drive` reports StateOverflow.
inline constexpr double kStateOverflowLimit = 1e3;

/// Runs x(t+1) = f(W x(t) + w u(t)) from x(0) = 0 over the whole input and
/// keeps x(washout+1) .. x(T). Row r of the result is the state after
/// consuming u(washout + r).
StateTrajectory drive(const Reservoir& reservoir, const TransferSpec& spec,
                      std::span<const double> input, int washout);

/// Same recurrence started from `initial_state` instead of zeros.
StateTrajectory drive(const Reservoir& reservoir, const TransferSpec& spec, std::span<const double> input,
                      int washout, const Eigen::VectorXd& initial_state);

}  // namespace esn
