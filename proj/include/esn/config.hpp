#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esn/metrics.hpp"
#include "esn/reservoir.hpp"
#include "esn/tasks.hpp"
#include "esn/transfer.hpp"

namespace esn {

enum class ExperimentKind {
  /// (v, transfer) grid at one spectral radius.
  Sweep,
  /// (v, lambda) grid on dense Gaussian reservoirs.
  Sensitivity,
};

std::string_view to_string(ExperimentKind kind) noexcept;

struct ExperimentConfig {
  std::string name;
  std::string description;
  ExperimentKind experiment = ExperimentKind::Sweep;
  TaskKind task = TaskKind::Memory;
  Topology topology = Topology::SimpleCycle;
  int size = 50;
  double lambda = 0.9;
  std::vector<double> v_grid;
  /// Sensitivity experiments only.
  std::vector<double> lambda_grid;
  std::vector<TransferSpec> transfer_grid;
  int seeds = 10;
  int train_length = 2000;
  int eval_length = 2000;
  /// Defaults to 2N when unset.
  std::optional<int> washout;
  int tau_max = 100;
  int legendre_order = 3;
  int horizon = 1;
  NmseConvention nmse_convention = NmseConvention::Paper;
  /// Evaluate on the training input realization instead of a fresh one.
  bool reuse_input = false;
  double ridge = 0.0;
  /// Supplied on the command line, never read from config files.
  std::uint64_t master_seed = 0;

  int effective_washout() const noexcept { return washout.value_or(2 * size); }

  /// Name of the scored metric in output records.
  std::string metric_name() const;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// 10^-5 .. 10^-1 in quarter decades, then 0.20, 0.25, 0.30, 0.35.
std::vector<double> default_v_grid();

/// taylor:1 .. taylor:4 and tanh.
std::vector<TransferSpec> default_transfer_grid();

/// Reference sweep settings: memory (scr, N=50, lambda=0.9), legendre3
/// (goe, N=50, lambda=0.1), mackey-glass (scr, N=500, lambda=0.9),
/// narma10 (scr, N=100, lambda=0.8).
ExperimentConfig default_config(TaskKind task);

/// Dense-Gaussian (v, lambda) grid over {0.1, ..., 1.0}^2 for linear and
/// tanh nodes, sized per task as in the reference sweeps.
ExperimentConfig default_sensitivity_config(TaskKind task);

/// Parses JSON text. "task" is required; every other key overrides the
/// defaults for that task and experiment kind. Unknown keys are errors.
ExperimentConfig parse_config(std::string_view json_text);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace esn
