#include "esn/readout.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "esn/error.hpp"

namespace esn {

namespace {

using Svd = Eigen::BDCSVD<Eigen::MatrixXd>;

Svd factor(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw Error(ErrorKind::SvdFailure, "SVD did not converge");
  return svd;
}

/// Inverted (or damped) singular values with the MATLAB truncation rule.
Eigen::VectorXd inverted_spectrum(const Svd& svd, Eigen::Index rows, Eigen::Index cols, double ridge) {
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  if (sigma.size() == 0) return inv;
  const double rtol =
      static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() * sigma.maxCoeff();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= rtol) continue;
    inv(i) = ridge > 0.0 ? sigma(i) / (sigma(i) * sigma(i) + ridge) : 1.0 / sigma(i);
  }
  return inv;
}

}  // namespace

ReadoutWeights::ReadoutWeights(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
  if (!weights_.allFinite()) throw Error(ErrorKind::InvalidArgument, "readout weights must be finite");
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return Eigen::MatrixXd::Zero(m.cols(), m.rows());
  const Svd svd = factor(m);
  const Eigen::VectorXd inv = inverted_spectrum(svd, m.rows(), m.cols(), 0.0);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ReadoutWeights train(const StateTrajectory& trajectory, const Eigen::MatrixXd& targets, double ridge) {
  const Eigen::MatrixXd& x = trajectory.states;
  if (targets.rows() != x.rows()) {
    std::ostringstream msg;
    msg << "trajectory has " << x.rows() << " rows but targets have " << targets.rows();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!(ridge >= 0.0)) throw Error(ErrorKind::InvalidRange, "ridge parameter must be non-negative");
  if (!targets.allFinite()) throw Error(ErrorKind::InvalidArgument, "targets must be finite");

  const Svd svd = factor(x);
  const Eigen::VectorXd inv = inverted_spectrum(svd, x.rows(), x.cols(), ridge);
  // V * diag(inv) * U^T * Y without forming the pseudoinverse.
  const Eigen::MatrixXd projected = svd.matrixU().transpose() * targets;
  const Eigen::MatrixXd psi_t = svd.matrixV() * (inv.asDiagonal() * projected);
  return ReadoutWeights(psi_t.transpose());
}

Eigen::MatrixXd predict(const ReadoutWeights& weights, const StateTrajectory& trajectory) {
  if (weights.width() != trajectory.width()) {
    std::ostringstream msg;
    msg << "readout expects width " << weights.width() << " but trajectory has " << trajectory.width();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  return trajectory.states * weights.weights().transpose();
}

}  // namespace esn
