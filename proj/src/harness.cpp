#include "esn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "esn/readout.hpp"

namespace esn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string stream_prefix(const ExperimentConfig& c) { return std::string(to_string(c.task)) + "/"; }

std::string seed_tag(int seed_index) { return "seed=" + std::to_string(seed_index); }

TaskInstance generate_task(const ExperimentConfig& c, RandomSource& src, int length) {
  switch (c.task) {
    case TaskKind::Memory: return gen_memory(src, length, c.tau_max);
    case TaskKind::Legendre: return gen_legendre(src, length, c.legendre_order, c.tau_max);
    case TaskKind::MackeyGlass: return gen_mackey_glass(src, length, c.horizon);
    case TaskKind::Narma10: return gen_narma10(src, length);
  }
  throw Error(ErrorKind::ConfigError, "unhandled task");
}

ExperimentResult blank_record(const ExperimentConfig& c, double lambda, double v, const TransferSpec& spec,
                              int seed_index) {
  ExperimentResult r;
  r.task = c.task;
  r.topology = c.topology;
  r.size = c.size;
  r.lambda = lambda;
  r.v = v;
  r.transfer = spec;
  r.seed_index = seed_index;
  r.metric = c.metric_name();
  return r;
}

struct PointOutcome {
  ExperimentResult record;
  Eigen::MatrixXd weights;
  Eigen::MatrixXd outputs;
  Eigen::MatrixXd targets;
};

double score(const ExperimentConfig& c, const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets) {
  if (c.task == TaskKind::Memory || c.task == TaskKind::Legendre) return total_capacity(outputs, targets).total;
  const auto rows = static_cast<std::size_t>(outputs.rows());
  return nmse({outputs.col(0).data(), rows}, {targets.col(0).data(), rows}, c.nmse_convention);
}

PointOutcome evaluate_point(const ExperimentConfig& c, const NetworkDraw& draw, double lambda, double v,
                            const TransferSpec& spec, int seed_index, bool keep_weights,
                            bool keep_outputs = false) {
  PointOutcome outcome{blank_record(c, lambda, v, spec, seed_index), {}, {}, {}};
  ExperimentResult& record = outcome.record;
  record.max_abs_state = kNaN;
  try {
    const Reservoir reservoir = make_reservoir(c, draw, lambda, v);
    const int washout = c.effective_washout();
    const RandomSource master(c.master_seed);

    RandomSource train_stream = master.derive(stream_prefix(c) + "train/" + seed_tag(seed_index));
    const TaskInstance train_task = generate_task(c, train_stream, c.train_length);
    const StateTrajectory train_states = drive(reservoir, spec, train_task.input, washout);
    record.max_abs_state = train_states.max_abs_state;
    const ReadoutWeights psi =
        train(train_states, train_task.targets.bottomRows(train_states.rows()), c.ridge);

    TaskInstance eval_task;
    if (c.reuse_input) {
      eval_task = train_task;
    } else {
      RandomSource eval_stream = master.derive(stream_prefix(c) + "eval/" + seed_tag(seed_index));
      eval_task = generate_task(c, eval_stream, c.eval_length);
    }
    const StateTrajectory eval_states = drive(reservoir, spec, eval_task.input, washout);
    record.max_abs_state = std::max(record.max_abs_state, eval_states.max_abs_state);

    Eigen::MatrixXd outputs = predict(psi, eval_states);
    Eigen::MatrixXd targets = eval_task.targets.bottomRows(eval_states.rows());
    const double value = score(c, outputs, targets);
    if (!std::isfinite(value)) throw Error(ErrorKind::DegenerateVariance, "metric is not finite");
    record.value = value;
    if (keep_weights) outcome.weights = psi.weights();
    if (keep_outputs) {
      outcome.outputs = std::move(outputs);
      outcome.targets = std::move(targets);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    record.value.reset();
    record.failure = e.kind();
    record.max_abs_state = kNaN;
  }
  return outcome;
}

template <typename Fn>
void parallel_for(std::size_t count, int parallelism, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, parallelism));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

struct GridPoint {
  double lambda;
  double v;
  TransferSpec spec;
  int seed_index;
};

std::vector<double> sorted(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values;
}

void append_summaries(const ExperimentConfig& c, std::vector<ExperimentResult>& records) {
  const auto seeds = static_cast<std::size_t>(c.seeds);
  const std::size_t groups = records.size() / seeds;
  std::vector<ExperimentResult> summaries;
  summaries.reserve(2 * groups);
  for (std::size_t g = 0; g < groups; ++g) {
    const auto first = records.begin() + static_cast<std::ptrdiff_t>(g * seeds);
    std::vector<double> values;
    double max_state = kNaN;
    for (auto it = first; it != first + static_cast<std::ptrdiff_t>(seeds); ++it) {
      if (it->failed()) continue;
      values.push_back(*it->value);
      max_state = std::isnan(max_state) ? it->max_abs_state : std::max(max_state, it->max_abs_state);
    }
    ExperimentResult mean_row = *first;
    mean_row.row = ExperimentResult::Row::Mean;
    mean_row.seed_index = -1;
    mean_row.failure.reset();
    mean_row.failed_seeds = static_cast<int>(seeds - values.size());
    mean_row.max_abs_state = max_state;
    ExperimentResult std_row = mean_row;
    std_row.row = ExperimentResult::Row::StdDev;

    const auto n = static_cast<double>(values.size());
    if (!values.empty()) {
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
      mean_row.value = mean;
      if (values.size() >= 2) {
        double ss = 0.0;
        for (double x : values) ss += (x - mean) * (x - mean);
        std_row.value = std::sqrt(ss / (n - 1.0));
      } else {
        std_row.value.reset();
      }
    } else {
      mean_row.value.reset();
      std_row.value.reset();
    }
    summaries.push_back(std::move(mean_row));
    summaries.push_back(std::move(std_row));
  }
  records.insert(records.end(), std::make_move_iterator(summaries.begin()),
                 std::make_move_iterator(summaries.end()));
}

SweepOutput run_grid(const ExperimentConfig& c, const std::vector<double>& radii, const RunOptions& options) {
  c.validate();
  std::vector<TransferSpec> specs = c.transfer_grid;
  std::sort(specs.begin(), specs.end());
  const std::vector<double> vs = sorted(c.v_grid);

  std::vector<GridPoint> points;
  points.reserve(radii.size() * vs.size() * specs.size() * static_cast<std::size_t>(c.seeds));
  for (double lambda : radii)
    for (double v : vs)
      for (const TransferSpec& spec : specs)
        for (int s = 0; s < c.seeds; ++s) points.push_back({lambda, v, spec, s});

  // Draws depend only on the seed index, so they are made once and shared.
  std::vector<std::optional<NetworkDraw>> draws(static_cast<std::size_t>(c.seeds));
  std::vector<ErrorKind> draw_errors(draws.size(), ErrorKind::SpectralEstimateFailure);
  parallel_for(draws.size(), options.parallelism, [&](std::size_t s) {
    try {
      draws[s] = draw_network(c, static_cast<int>(s));
    } catch (const Error& e) {
      draw_errors[s] = e.kind();
    }
  });

  std::vector<PointOutcome> outcomes(points.size());
  parallel_for(points.size(), options.parallelism, [&](std::size_t i) {
    const GridPoint& p = points[i];
    const auto& draw = draws[static_cast<std::size_t>(p.seed_index)];
    if (!draw) {
      outcomes[i].record = blank_record(c, p.lambda, p.v, p.spec, p.seed_index);
      outcomes[i].record.failure = draw_errors[static_cast<std::size_t>(p.seed_index)];
      outcomes[i].record.max_abs_state = kNaN;
      return;
    }
    outcomes[i] = evaluate_point(c, *draw, p.lambda, p.v, p.spec, p.seed_index, options.keep_weights);
  });

  SweepOutput out;
  out.records.reserve(points.size() + points.size() / static_cast<std::size_t>(c.seeds) * 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out.records.push_back(std::move(outcomes[i].record));
    if (options.keep_weights && !out.records.back().failed()) {
      out.weights.push_back({points[i].lambda, points[i].v, points[i].spec, points[i].seed_index,
                             std::move(outcomes[i].weights)});
    }
  }
  append_summaries(c, out.records);
  return out;
}

}  // namespace

NetworkDraw draw_network(const ExperimentConfig& c, int seed_index) {
  const RandomSource master(c.master_seed);
  const std::string n_tag = "N=" + std::to_string(c.size) + "/";
  NetworkDraw draw;
  if (c.topology != Topology::SimpleCycle) {
    RandomSource src =
        master.derive(stream_prefix(c) + "reservoir/" + std::string(to_string(c.topology)) + "/" + n_tag + seed_tag(seed_index));
    draw.raw = c.topology == Topology::GaussianOrthogonal ? sample_gaussian_orthogonal(c.size, src)
                                                          : sample_dense_gaussian(c.size, src);
    draw.raw_radius = spectral_radius_estimate(draw.raw);
  }
  RandomSource sign_src = master.derive(stream_prefix(c) + "input-weights/" + n_tag + seed_tag(seed_index));
  draw.signs = build_input_weights(c.size, 1.0, sign_src);
  return draw;
}

Reservoir make_reservoir(const ExperimentConfig& c, const NetworkDraw& draw, double lambda, double v) {
  Eigen::MatrixXd weights = c.topology == Topology::SimpleCycle ? build_simple_cycle(c.size, lambda)
                                                                : rescale_to_radius(draw.raw, draw.raw_radius, lambda);
  return Reservoir(std::move(weights), v * draw.signs, lambda, c.topology);
}

PointDetail run_point_detail(const ExperimentConfig& config, double v, const TransferSpec& spec, int seed_index) {
  config.validate();
  NetworkDraw draw;
  try {
    draw = draw_network(config, seed_index);
  } catch (const Error& e) {
    PointDetail detail{blank_record(config, config.lambda, v, spec, seed_index), {}, {}};
    detail.record.failure = e.kind();
    detail.record.max_abs_state = kNaN;
    return detail;
  }
  PointOutcome outcome = evaluate_point(config, draw, config.lambda, v, spec, seed_index, false, true);
  return {std::move(outcome.record), std::move(outcome.outputs), std::move(outcome.targets)};
}

std::vector<ExperimentResult> run_point(const ExperimentConfig& config, double v, const TransferSpec& spec,
                                        int seed_index) {
  return {run_point_detail(config, v, spec, seed_index).record};
}

SweepOutput run_sweep(const ExperimentConfig& config, const RunOptions& options) {
  if (config.experiment != ExperimentKind::Sweep) {
    throw Error(ErrorKind::ConfigError, "run_sweep needs a sweep config");
  }
  return run_grid(config, {config.lambda}, options);
}

SweepOutput run_sensitivity(const ExperimentConfig& config, const RunOptions& options) {
  if (config.experiment != ExperimentKind::Sensitivity) {
    throw Error(ErrorKind::ConfigError, "run_sensitivity needs a sensitivity config");
  }
  return run_grid(config, sorted(config.lambda_grid), options);
}

SweepOutput run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  return config.experiment == ExperimentKind::Sweep ? run_sweep(config, options) : run_sensitivity(config, options);
}

}  // namespace esn
