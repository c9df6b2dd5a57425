#pragma once

#include <Eigen/Dense>

#include "esn/reservoir.hpp"

namespace esn {

/// Linear readout: K x (N+1) weights, last column multiplies the bias.
class ReadoutWeights {
 public:
  explicit ReadoutWeights(Eigen::MatrixXd weights);

  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  int targets() const noexcept { return static_cast<int>(weights_.rows()); }
  int width() const noexcept { return static_cast<int>(weights_.cols()); }

 private:
  Eigen::MatrixXd weights_;
};

/// Moore-Penrose pseudoinverse by SVD. Singular values at or below
/// max(R, C) * eps * sigma_max are treated as zero (the MATLAB pinv default).
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m);

/// Minimum-norm least-squares readout, Psi^T = pinv(X) * Y, all K target
/// columns from one factorisation.
///
/// `ridge` > 0 switches to Tikhonov-damped singular values
/// sigma / (sigma^2 + ridge); it defaults to 0 and is not part of the
/// reference protocol.
ReadoutWeights train(const StateTrajectory& trajectory, const Eigen::MatrixXd& targets, double ridge = 0.0);

/// States (with bias) times Psi^T: one row per kept step, one column per target.
Eigen::MatrixXd predict(const ReadoutWeights& weights, const StateTrajectory& trajectory);

}  // namespace esn
