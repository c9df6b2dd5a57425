#include "esn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "esn/error.hpp"

namespace esn {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

std::vector<double> tenths() {
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(static_cast<double>(k) / 10.0);
  return grid;
}

int reference_size(TaskKind task) {
  switch (task) {
    case TaskKind::Memory:
    case TaskKind::Legendre: return 50;
    case TaskKind::MackeyGlass: return 500;
    case TaskKind::Narma10: return 100;
  }
  return 50;
}

template <typename T>
T get_as(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception& e) {
    config_error("key '" + key + "': " + e.what());
  }
}

void check_grid(const std::vector<double>& grid, const std::string& what) {
  if (grid.empty()) config_error(what + " is empty");
  std::set<double> seen;
  for (double v : grid) {
    if (!std::isfinite(v)) config_error(what + " has a non-finite entry");
    if (!seen.insert(v).second) config_error(what + " has duplicate entries");
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  return kind == ExperimentKind::Sweep ? "sweep" : "sensitivity";
}

std::string ExperimentConfig::metric_name() const {
  switch (task) {
    case TaskKind::Memory: return "memory_capacity_total";
    case TaskKind::Legendre: return "legendre" + std::to_string(legendre_order) + "_capacity_total";
    case TaskKind::MackeyGlass:
    case TaskKind::Narma10: return "nmse";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (size < 2) config_error("N must be >= 2");
  if (seeds < 1) config_error("seeds must be >= 1");
  if (transfer_grid.empty()) config_error("transfer_grid is empty");
  for (std::size_t i = 0; i < transfer_grid.size(); ++i)
    for (std::size_t j = i + 1; j < transfer_grid.size(); ++j)
      if (transfer_grid[i] == transfer_grid[j]) config_error("transfer_grid has duplicate entries");
  check_grid(v_grid, "v_grid");
  for (double v : v_grid)
    if (v < 0.0) config_error("v_grid entries must be non-negative");

  std::vector<double> radii = {lambda};
  if (experiment == ExperimentKind::Sensitivity) {
    if (topology != Topology::DenseGaussian) config_error("sensitivity experiments require the dense topology");
    check_grid(lambda_grid, "lambda_grid");
    radii = lambda_grid;
  } else if (!lambda_grid.empty()) {
    config_error("lambda_grid is only valid for sensitivity experiments");
  }
  for (double r : radii) {
    if (!(r > 0.0)) config_error("spectral radius must be positive");
    if (topology == Topology::SimpleCycle && r > 1.0) config_error("simple-cycle spectral radius must be <= 1");
  }

  const int wash = effective_washout();
  if (wash < 0) config_error("washout must be non-negative");
  if (train_length <= wash || eval_length <= wash) config_error("train_length and eval_length must exceed the washout");
  if (train_length - wash < 2 || eval_length - wash < 2) config_error("fewer than 2 scored steps after washout");
  if (task == TaskKind::Memory || task == TaskKind::Legendre) {
    if (tau_max < 1) config_error("tau_max must be >= 1");
    // Rows with t < tau are zero-padded; they must fall inside the washout.
    if (wash < tau_max) config_error("washout must be >= tau_max so padded target rows are discarded");
  }
  if (task == TaskKind::Legendre && (legendre_order < 0 || legendre_order > 10)) {
    config_error("legendre_order must be in [0, 10]");
  }
  if (task == TaskKind::MackeyGlass && horizon < 0) config_error("horizon must be >= 0");
  if (!(ridge >= 0.0)) config_error("ridge must be >= 0");
}

std::vector<double> default_v_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 16; ++k) grid.push_back(std::pow(10.0, -5.0 + 0.25 * static_cast<double>(k)));
  for (double v : {0.20, 0.25, 0.30, 0.35}) grid.push_back(v);
  return grid;
}

std::vector<TransferSpec> default_transfer_grid() {
  return {TransferSpec::taylor(1), TransferSpec::taylor(2), TransferSpec::taylor(3), TransferSpec::taylor(4),
          TransferSpec::tanh()};
}

ExperimentConfig default_config(TaskKind task) {
  ExperimentConfig c;
  c.task = task;
  c.size = reference_size(task);
  c.v_grid = default_v_grid();
  c.transfer_grid = default_transfer_grid();
  switch (task) {
    case TaskKind::Memory:
      c.topology = Topology::SimpleCycle;
      c.lambda = 0.9;
      break;
    case TaskKind::Legendre:
      c.topology = Topology::GaussianOrthogonal;
      c.lambda = 0.1;
      break;
    case TaskKind::MackeyGlass:
      c.topology = Topology::SimpleCycle;
      c.lambda = 0.9;
      break;
    case TaskKind::Narma10:
      c.topology = Topology::SimpleCycle;
      c.lambda = 0.8;
      break;
  }
  c.name = std::string(to_string(task));
  return c;
}

ExperimentConfig default_sensitivity_config(TaskKind task) {
  ExperimentConfig c = default_config(task);
  c.experiment = ExperimentKind::Sensitivity;
  c.topology = Topology::DenseGaussian;
  c.v_grid = tenths();
  c.lambda_grid = tenths();
  c.transfer_grid = {TransferSpec::linear(), TransferSpec::tanh()};
  c.name = std::string(to_string(task)) + "-sensitivity";
  return c;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    config_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("config must be a JSON object");
  if (!doc.contains("task")) config_error("config is missing the required key 'task'");

  const TaskKind task = parse_task(get_as<std::string>(doc["task"], "task"));
  ExperimentKind kind = ExperimentKind::Sweep;
  if (doc.contains("experiment")) {
    const auto name = get_as<std::string>(doc["experiment"], "experiment");
    if (name == "sweep") {
      kind = ExperimentKind::Sweep;
    } else if (name == "sensitivity") {
      kind = ExperimentKind::Sensitivity;
    } else {
      config_error("unknown experiment '" + name + "' (want sweep or sensitivity)");
    }
  }
  ExperimentConfig c = kind == ExperimentKind::Sweep ? default_config(task) : default_sensitivity_config(task);

  for (const auto& [key, value] : doc.items()) {
    if (key == "task" || key == "experiment") continue;
    if (key == "name") {
      c.name = get_as<std::string>(value, key);
    } else if (key == "description") {
      c.description = get_as<std::string>(value, key);
    } else if (key == "topology") {
      c.topology = parse_topology(get_as<std::string>(value, key));
    } else if (key == "N") {
      c.size = get_as<int>(value, key);
    } else if (key == "lambda") {
      c.lambda = get_as<double>(value, key);
    } else if (key == "v_grid") {
      c.v_grid = get_as<std::vector<double>>(value, key);
    } else if (key == "lambda_grid") {
      c.lambda_grid = get_as<std::vector<double>>(value, key);
    } else if (key == "transfer_grid") {
      c.transfer_grid.clear();
      for (const auto& token : get_as<std::vector<std::string>>(value, key))
        c.transfer_grid.push_back(TransferSpec::parse(token));
    } else if (key == "seeds") {
      c.seeds = get_as<int>(value, key);
    } else if (key == "train_length") {
      c.train_length = get_as<int>(value, key);
    } else if (key == "eval_length") {
      c.eval_length = get_as<int>(value, key);
    } else if (key == "washout") {
      c.washout = get_as<int>(value, key);
    } else if (key == "tau_max") {
      c.tau_max = get_as<int>(value, key);
    } else if (key == "legendre_order") {
      c.legendre_order = get_as<int>(value, key);
    } else if (key == "horizon") {
      c.horizon = get_as<int>(value, key);
    } else if (key == "nmse_convention") {
      c.nmse_convention = parse_nmse_convention(get_as<std::string>(value, key));
    } else if (key == "reuse_input") {
      c.reuse_input = get_as<bool>(value, key);
    } else if (key == "ridge") {
      c.ridge = get_as<double>(value, key);
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    ExperimentConfig c = parse_config(text.str());
    if (c.name.empty()) c.name = path.stem().string();
    return c;
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

}  // namespace esn
