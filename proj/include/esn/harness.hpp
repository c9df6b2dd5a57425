#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esn/config.hpp"
#include "esn/error.hpp"

namespace esn {

/// One CSV row. Point rows carry a seed index; summary rows carry the mean
/// or sample standard deviation over the non-failed seeds of a grid point.
struct ExperimentResult {
  enum class Row { Point, Mean, StdDev };

  TaskKind task = TaskKind::Memory;
  Topology topology = Topology::SimpleCycle;
  int size = 0;
  double lambda = 0.0;
  double v = 0.0;
  TransferSpec transfer = TransferSpec::linear();
  Row row = Row::Point;
  int seed_index = 0;
  std::string metric;
  /// Empty for failed runs (written as FAIL).
  std::optional<double> value;
  /// NaN when no trajectory completed.
  double max_abs_state = 0.0;
  /// Error kind of a failed run; not serialised.
  std::optional<ErrorKind> failure;
  /// Summary rows: number of seeds that failed.
  int failed_seeds = 0;

  bool failed() const noexcept { return !value.has_value(); }
};

/// Trained readout of a single run, for the optional weights sidecar.
struct RunWeights {
  double lambda = 0.0;
  double v = 0.0;
  TransferSpec transfer = TransferSpec::linear();
  int seed_index = 0;
  Eigen::MatrixXd weights;
};

struct SweepOutput {
  /// Point rows in canonical order, then summary rows.
  std::vector<ExperimentResult> records;
  std::vector<RunWeights> weights;
};

struct RunOptions {
  int parallelism = 1;
  bool keep_weights = false;
};

/// Random draws of one seed index that do not depend on v, the transfer
/// function or (for GOE and dense topologies) lambda.
struct NetworkDraw {
  Eigen::MatrixXd raw;
  double raw_radius = 0.0;
  Eigen::VectorXd signs;
};

NetworkDraw draw_network(const ExperimentConfig& config, int seed_index);

/// Reservoir for a draw at the given spectral radius and input scale.
Reservoir make_reservoir(const ExperimentConfig& config, const NetworkDraw& draw, double lambda, double v);

/// Train on one task realization, evaluate on another (or the same, with
/// reuse_input), score with the task metric. Per-run failures are returned
/// as a FAIL record, never thrown.
std::vector<ExperimentResult> run_point(const ExperimentConfig& config, double v, const TransferSpec& spec,
                                        int seed_index);

/// A run_point record plus the evaluation-phase readout outputs and the
/// aligned targets (washout rows removed). Both are empty for failed runs.
struct PointDetail {
  ExperimentResult record;
  Eigen::MatrixXd outputs;
  Eigen::MatrixXd targets;
};

PointDetail run_point_detail(const ExperimentConfig& config, double v, const TransferSpec& spec, int seed_index);

/// Every (v, transfer, seed) point of a sweep config, followed by mean and
/// standard-deviation rows per (v, transfer). Output is identical for any
/// parallelism.
SweepOutput run_sweep(const ExperimentConfig& config, const RunOptions& options = {});

/// (lambda, v, transfer, seed) grid of a sensitivity config.
SweepOutput run_sensitivity(const ExperimentConfig& config, const RunOptions& options = {});

/// Dispatches on config.experiment.
SweepOutput run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace esn
