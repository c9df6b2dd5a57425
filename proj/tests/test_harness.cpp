#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "esn/config.hpp"
#include "esn/csv.hpp"
#include "esn/error.hpp"
#include "esn/harness.hpp"

#ifndef ESN_CONFIG_DIR
#error "ESN_CONFIG_DIR must point at the shipped configs"
#endif

namespace fs = std::filesystem;
using esn::ExperimentConfig;
using esn::TransferSpec;

namespace {

ExperimentConfig small_memory() {
  ExperimentConfig c = esn::default_config(esn::TaskKind::Memory);
  c.size = 10;
  c.train_length = 300;
  c.eval_length = 300;
  c.tau_max = 10;
  c.seeds = 2;
  c.v_grid = {0.3, 0.01, 0.1};
  c.transfer_grid = {TransferSpec::tanh(), TransferSpec::linear()};
  c.master_seed = 5;
  return c;
}

std::string to_csv(const std::vector<esn::ExperimentResult>& records) {
  std::ostringstream out;
  esn::write_csv(records, out);
  return out.str();
}

esn::ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const esn::Error& e) {
    return e.kind();
  }
  FAIL("expected an esn::Error");
  return esn::ErrorKind::IoError;
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("esn-test-" + name); }

}  // namespace

TEST_CASE("default v grid") {
  const auto v = esn::default_v_grid();
  REQUIRE(v.size() == 21);
  CHECK(v.front() == doctest::Approx(1e-5));
  CHECK(v[16] == doctest::Approx(0.1));
  CHECK(v.back() == 0.35);
  for (std::size_t i = 1; i <= 16; ++i) CHECK(v[i] / v[i - 1] == doctest::Approx(std::pow(10.0, 0.25)));
  CHECK(v[17] == 0.20);
  CHECK(v[18] == 0.25);
  CHECK(v[19] == 0.30);
  CHECK(std::is_sorted(v.begin(), v.end()));
}

TEST_CASE("default configs per task") {
  const auto mem = esn::default_config(esn::TaskKind::Memory);
  CHECK(mem.topology == esn::Topology::SimpleCycle);
  CHECK(mem.size == 50);
  CHECK(mem.lambda == 0.9);
  CHECK(mem.seeds == 10);
  CHECK(mem.effective_washout() == 100);
  CHECK(mem.transfer_grid.size() == 5);
  CHECK(mem.metric_name() == "memory_capacity_total");
  CHECK_NOTHROW(mem.validate());

  const auto leg = esn::default_config(esn::TaskKind::Legendre);
  CHECK(leg.topology == esn::Topology::GaussianOrthogonal);
  CHECK(leg.lambda == 0.1);
  CHECK(leg.metric_name() == "legendre3_capacity_total");

  const auto mg = esn::default_config(esn::TaskKind::MackeyGlass);
  CHECK(mg.size == 500);
  CHECK(mg.horizon == 1);
  CHECK(mg.metric_name() == "nmse");

  const auto narma = esn::default_config(esn::TaskKind::Narma10);
  CHECK(narma.size == 100);
  CHECK(narma.lambda == 0.8);

  const auto sens = esn::default_sensitivity_config(esn::TaskKind::Memory);
  CHECK(sens.experiment == esn::ExperimentKind::Sensitivity);
  CHECK(sens.topology == esn::Topology::DenseGaussian);
  CHECK(sens.v_grid.size() == 10);
  CHECK(sens.lambda_grid.size() == 10);
  CHECK_NOTHROW(sens.validate());
}

TEST_CASE("config parsing") {
  SUBCASE("minimal config takes task defaults") {
    const auto c = esn::parse_config(R"({"task": "narma10"})");
    CHECK(c.task == esn::TaskKind::Narma10);
    CHECK(c.size == 100);
    CHECK(c.v_grid == esn::default_v_grid());
  }
  SUBCASE("overrides") {
    const auto c = esn::parse_config(R"({"task": "memory", "N": 20, "lambda": 0.5, "seeds": 3,
        "v_grid": [0.1, 0.2], "transfer_grid": ["taylor:2", "tanh"], "washout": 60,
        "tau_max": 20, "nmse_convention": "standard", "reuse_input": true, "ridge": 1e-6,
        "train_length": 500, "eval_length": 400, "name": "x", "description": "y"})");
    CHECK(c.size == 20);
    CHECK(c.lambda == 0.5);
    CHECK(c.seeds == 3);
    CHECK(c.v_grid == std::vector<double>{0.1, 0.2});
    CHECK(c.transfer_grid == std::vector<TransferSpec>{TransferSpec::taylor(2), TransferSpec::tanh()});
    CHECK(c.effective_washout() == 60);
    CHECK(c.tau_max == 20);
    CHECK(c.nmse_convention == esn::NmseConvention::Standard);
    CHECK(c.reuse_input);
    CHECK(c.ridge == 1e-6);
    CHECK(c.train_length == 500);
    CHECK(c.eval_length == 400);
    CHECK(c.name == "x");
  }
  SUBCASE("errors are config errors") {
    for (const char* bad : {
             R"({})",
             R"({"task": "memory", "colour": 1})",
             R"({"task": "memory", "transfer_grid": []})",
             R"({"task": "memory", "v_grid": []})",
             R"({"task": "memory", "v_grid": [0.1, 0.1]})",
             R"({"task": "memory", "transfer_grid": ["tanh", "tanh"]})",
             R"({"task": "memory", "transfer_grid": ["sigmoid"]})",
             R"({"task": "memory", "washout": 50})",
             R"({"task": "memory", "lambda": 1.5})",
             R"({"task": "memory", "seeds": 0})",
             R"({"task": "memory", "N": "fifty"})",
             R"({"task": "memory", "experiment": "sensitivity", "topology": "scr"})",
             R"({"task": "memory", "lambda_grid": [0.1]})",
             R"({"task": "tetris"})",
             R"([1, 2])",
             R"({"task": )",
         }) {
      CAPTURE(bad);
      CHECK(kind_of([&] { esn::parse_config(bad); }) == esn::ErrorKind::ConfigError);
    }
  }
  SUBCASE("out-of-range Taylor order keeps its own kind") {
    CHECK(kind_of([] { esn::parse_config(R"({"task": "memory", "transfer_grid": ["taylor:17"]})"); }) ==
          esn::ErrorKind::InvalidRange);
  }
}

TEST_CASE("every shipped config loads and validates") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(ESN_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().string());
    const auto c = esn::load_config(entry.path());
    CHECK_NOTHROW(c.validate());
    CHECK(c.name == entry.path().stem().string());
    ++count;
  }
  CHECK(count == 8);
  for (const char* name : {"fig2a", "fig2b", "fig2c", "fig2d", "fig5", "fig6", "fig7", "fig8"})
    CHECK(fs::exists(fs::path(ESN_CONFIG_DIR) / (std::string(name) + ".json")));
}

TEST_CASE("load_config reports the path") {
  const fs::path missing = temp_path("missing.json");
  fs::remove(missing);
  try {
    esn::load_config(missing);
    FAIL("expected a throw");
  } catch (const esn::Error& e) {
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
  const fs::path bad = temp_path("bad.json");
  std::ofstream(bad) << R"({"task": "memory", "oops": true})";
  try {
    esn::load_config(bad);
    FAIL("expected a throw");
  } catch (const esn::Error& e) {
    CHECK(e.kind() == esn::ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
  fs::remove(bad);
}

TEST_CASE("run_point is deterministic and reports the task metric") {
  const auto c = small_memory();
  const auto a = esn::run_point(c, 0.1, TransferSpec::tanh(), 0);
  const auto b = esn::run_point(c, 0.1, TransferSpec::tanh(), 0);
  REQUIRE(a.size() == 1);
  REQUIRE_FALSE(a[0].failed());
  CHECK(*a[0].value == *b[0].value);
  CHECK(a[0].max_abs_state == b[0].max_abs_state);
  CHECK(a[0].metric == "memory_capacity_total");
  CHECK(*a[0].value > 0.0);
  CHECK(*a[0].value <= 10.0);
  CHECK(a[0].max_abs_state < 1.0);

  const auto other_seed = esn::run_point(c, 0.1, TransferSpec::tanh(), 1);
  CHECK(*other_seed[0].value != *a[0].value);
  ExperimentConfig other_master = c;
  other_master.master_seed = 6;
  CHECK(*esn::run_point(other_master, 0.1, TransferSpec::tanh(), 0)[0].value != *a[0].value);
}

TEST_CASE("run_point covers every task") {
  for (auto task : {esn::TaskKind::Legendre, esn::TaskKind::MackeyGlass, esn::TaskKind::Narma10}) {
    ExperimentConfig c = esn::default_config(task);
    c.size = 20;
    c.train_length = 400;
    c.eval_length = 400;
    c.tau_max = 10;
    c.master_seed = 3;
    CAPTURE(esn::to_string(task));
    const auto r = esn::run_point(c, 0.1, TransferSpec::tanh(), 0);
    REQUIRE(r.size() == 1);
    REQUIRE_FALSE(r[0].failed());
    CHECK(std::isfinite(*r[0].value));
    CHECK(*r[0].value >= 0.0);
  }
}

TEST_CASE("reuse_input evaluates on the training realization") {
  ExperimentConfig c = small_memory();
  c.reuse_input = true;
  const auto reused = esn::run_point(c, 0.1, TransferSpec::linear(), 0);
  c.reuse_input = false;
  const auto fresh = esn::run_point(c, 0.1, TransferSpec::linear(), 0);
  CHECK(*reused[0].value != *fresh[0].value);
}

TEST_CASE("sweep grid arithmetic and canonical order") {
  const auto c = small_memory();
  const auto out = esn::run_sweep(c);
  const std::size_t points = 3 * 2 * 2;
  REQUIRE(out.records.size() == points + 2 * 3 * 2);
  for (std::size_t i = 0; i < points; ++i) CHECK(out.records[i].row == esn::ExperimentResult::Row::Point);
  CHECK(out.records[0].v == 0.01);
  CHECK(out.records[0].transfer == TransferSpec::linear());
  CHECK(out.records[0].seed_index == 0);
  CHECK(out.records[1].seed_index == 1);
  CHECK(out.records[2].transfer == TransferSpec::tanh());
  CHECK(out.records[4].v == 0.1);
  CHECK(out.records[points].row == esn::ExperimentResult::Row::Mean);
  CHECK(out.records[points + 1].row == esn::ExperimentResult::Row::StdDev);
  CHECK(out.weights.empty());
}

TEST_CASE("summary rows are the mean and sample standard deviation") {
  const auto c = small_memory();
  const auto out = esn::run_sweep(c);
  const double a = *out.records[0].value;
  const double b = *out.records[1].value;
  const auto& mean_row = out.records[12];
  const auto& std_row = out.records[13];
  CHECK(*mean_row.value == doctest::Approx(0.5 * (a + b)).epsilon(1e-15));
  CHECK(*std_row.value == doctest::Approx(std::abs(a - b) / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(mean_row.failed_seeds == 0);
  CHECK(mean_row.max_abs_state == std::max(out.records[0].max_abs_state, out.records[1].max_abs_state));
}

TEST_CASE("sweep matches independent run_point calls") {
  const auto c = small_memory();
  const auto out = esn::run_sweep(c);
  for (std::size_t i = 0; i < 12; ++i) {
    const auto& r = out.records[i];
    const auto single = esn::run_point(c, r.v, r.transfer, r.seed_index);
    CHECK(*single[0].value == *r.value);
  }
}

TEST_CASE("sweep output does not depend on parallelism") {
  const auto c = small_memory();
  const std::string serial = to_csv(esn::run_sweep(c, {.parallelism = 1}).records);
  const std::string threaded = to_csv(esn::run_sweep(c, {.parallelism = 8}).records);
  CHECK(serial == threaded);
}

TEST_CASE("sweeps share draws across v and transfer") {
  const auto c = small_memory();
  const auto d0 = esn::draw_network(c, 0);
  const auto r1 = esn::make_reservoir(c, d0, 0.9, 0.1);
  const auto r2 = esn::make_reservoir(c, d0, 0.9, 0.3);
  CHECK((r2.input_weights() - 3.0 * r1.input_weights()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(r1.weights() == r2.weights());
  CHECK(esn::draw_network(c, 1).signs != d0.signs);
}

TEST_CASE("failed runs become FAIL records and the sweep completes") {
  ExperimentConfig c = small_memory();
  c.v_grid = {0.1, 50.0};
  c.transfer_grid = {TransferSpec::taylor(2), TransferSpec::tanh()};
  const auto out = esn::run_sweep(c);
  REQUIRE(out.records.size() == 8 + 8);
  int failures = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& r = out.records[i];
    if (r.failed()) {
      ++failures;
      CHECK(r.v == 50.0);
      CHECK(r.transfer == TransferSpec::taylor(2));
      CHECK(r.failure == esn::ErrorKind::StateOverflow);
      CHECK(std::isnan(r.max_abs_state));
    }
  }
  CHECK(failures == 2);
  const auto& failed_mean = out.records[8 + 2 * 2];
  CHECK(failed_mean.v == 50.0);
  CHECK(failed_mean.transfer == TransferSpec::taylor(2));
  CHECK(failed_mean.failed());
  CHECK(failed_mean.failed_seeds == 2);

  const std::string csv = to_csv(out.records);
  CHECK(csv.find(",FAIL,nan\n") != std::string::npos);
}

TEST_CASE("sensitivity grid") {
  ExperimentConfig c = esn::default_sensitivity_config(esn::TaskKind::Memory);
  c.size = 10;
  c.train_length = 300;
  c.eval_length = 300;
  c.tau_max = 10;
  c.seeds = 2;
  c.v_grid = {0.2, 0.1};
  c.lambda_grid = {0.9, 0.5};
  c.master_seed = 2;
  const auto out = esn::run_sensitivity(c);
  REQUIRE(out.records.size() == 2 * 2 * 2 * 2 + 2 * 8);
  CHECK(out.records.front().lambda == 0.5);
  CHECK(out.records.front().v == 0.1);
  CHECK(out.records[8].lambda == 0.9);
  CHECK(out.records.front().topology == esn::Topology::DenseGaussian);

  CHECK(kind_of([&] { esn::run_sweep(c); }) == esn::ErrorKind::ConfigError);
  CHECK(kind_of([] { esn::run_sensitivity(small_memory()); }) == esn::ErrorKind::ConfigError);
  CHECK(to_csv(esn::run_experiment(c).records) == to_csv(out.records));
}

TEST_CASE("weights are kept on request") {
  const auto c = small_memory();
  const auto out = esn::run_sweep(c, {.parallelism = 2, .keep_weights = true});
  REQUIRE(out.weights.size() == 12);
  CHECK(out.weights[0].weights.rows() == c.tau_max);
  CHECK(out.weights[0].weights.cols() == c.size + 1);

  const fs::path path = temp_path("weights.csv");
  esn::write_weights_csv(c, out.weights, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "task,v,transfer,seed,lambda,target,index,weight");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 12u * static_cast<std::size_t>(c.tau_max * (c.size + 1)));
  fs::remove(path);
}

TEST_CASE("CSV writer") {
  SUBCASE("empty results give the header only") {
    CHECK(to_csv({}) == std::string(esn::kResultsHeader) + "\n");
  }
  SUBCASE("real formatting") {
    CHECK(esn::format_real(0.1) == "0.10000000000000001");
    CHECK(esn::format_real(1.0) == "1");
    CHECK(esn::format_real(std::nan("")) == "nan");
    CHECK(esn::format_real(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(esn::format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  }
  SUBCASE("row layout") {
    esn::ExperimentResult r;
    r.task = esn::TaskKind::Narma10;
    r.topology = esn::Topology::SimpleCycle;
    r.size = 100;
    r.lambda = 0.8;
    r.v = 0.25;
    r.transfer = TransferSpec::taylor(3);
    r.seed_index = 4;
    r.metric = "nmse";
    r.value = 0.5;
    r.max_abs_state = 0.75;
    esn::ExperimentResult m = r;
    m.row = esn::ExperimentResult::Row::Mean;
    esn::ExperimentResult s = r;
    s.row = esn::ExperimentResult::Row::StdDev;
    s.value.reset();
    const std::string csv = to_csv({r, m, s});
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == esn::kResultsHeader);
    std::getline(lines, line);
    CHECK(line == "narma10,scr,100,0.80000000000000004,0.25,taylor:3,4,nmse,0.5,0.75");
    std::getline(lines, line);
    CHECK(line == "narma10,scr,100,0.80000000000000004,0.25,taylor:3,mean,nmse,0.5,0.75");
    std::getline(lines, line);
    CHECK(line == "narma10,scr,100,0.80000000000000004,0.25,taylor:3,std,nmse,FAIL,0.75");
  }
  SUBCASE("unwritable path is an I/O error naming the path") {
    const fs::path bad = "/nonexistent-dir/out.csv";
    try {
      esn::write_csv({}, bad);
      FAIL("expected a throw");
    } catch (const esn::Error& e) {
      CHECK(e.kind() == esn::ErrorKind::IoError);
      CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    }
  }
}

TEST_CASE("CSV round trip is exact") {
  const auto c = small_memory();
  const auto out = esn::run_sweep(c);
  const fs::path path = temp_path("roundtrip.csv");
  esn::write_csv(out.records, path);
  const auto back = esn::read_csv(path);
  REQUIRE(back.size() == out.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& r = out.records[i];
    const auto& b = back[i];
    CHECK(b.task == "memory");
    CHECK(b.topology == "scr");
    CHECK(b.size == r.size);
    CHECK(b.lambda == r.lambda);
    CHECK(b.v == r.v);
    CHECK(b.transfer == r.transfer.token());
    CHECK(b.metric == r.metric);
    REQUIRE(b.value.has_value() == r.value.has_value());
    if (r.value) CHECK(*b.value == *r.value);
    CHECK(b.max_abs_state == r.max_abs_state);
  }
  CHECK(back[0].seed == "0");
  CHECK(back[12].seed == "mean");
  CHECK(back[13].seed == "std");
  fs::remove(path);
}

TEST_CASE("CSV reader errors") {
  const fs::path missing = temp_path("absent.csv");
  fs::remove(missing);
  CHECK(kind_of([&] { esn::read_csv(missing); }) == esn::ErrorKind::IoError);

  const fs::path wrong = temp_path("wrong.csv");
  std::ofstream(wrong) << "a,b,c\n1,2,3\n";
  CHECK(kind_of([&] { esn::read_csv(wrong); }) == esn::ErrorKind::IoError);
  std::ofstream(wrong) << esn::kResultsHeader << "\nmemory,scr,50\n";
  try {
    esn::read_csv(wrong);
    FAIL("expected a throw");
  } catch (const esn::Error& e) {
    CHECK(std::string(e.what()).find(wrong.string()) != std::string::npos);
  }
  fs::remove(wrong);
}

TEST_CASE("Taylor error and series CSVs") {
  const fs::path path = temp_path("taylor.csv");
  esn::write_taylor_error_csv(8, 1001, path);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,rmse");
  double previous = std::numeric_limits<double>::infinity();
  int m_expected = 1;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stoi(line.substr(0, comma)) == m_expected);
    const double r = std::stod(line.substr(comma + 1));
    CHECK(r == esn::rmse_to_tanh(m_expected));
    CHECK(r < previous);
    previous = r;
    ++m_expected;
  }
  CHECK(m_expected == 9);
  fs::remove(path);

  const fs::path series = temp_path("series.csv");
  esn::write_series_csv({1.0, 0.5, 0.25}, 1.0, series);
  std::ifstream s(series);
  std::getline(s, line);
  CHECK(line == "t,x");
  std::getline(s, line);
  CHECK(line == "0,1");
  fs::remove(series);
}
