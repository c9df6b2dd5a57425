#include "esn/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "esn/transfer.hpp"

namespace esn {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing: " + std::strerror(errno));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to " + path.string() + " failed");
}

std::string seed_field(const ExperimentResult& r) {
  switch (r.row) {
    case ExperimentResult::Row::Point: return std::to_string(r.seed_index);
    case ExperimentResult::Row::Mean: return "mean";
    case ExperimentResult::Row::StdDev: return "std";
  }
  return "";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_real(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorKind::IoError, path.string() + ":" + std::to_string(line) + ": bad number '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(const std::vector<ExperimentResult>& results, std::ostream& out) {
  out << kResultsHeader << '\n';
  for (const ExperimentResult& r : results) {
    out << to_string(r.task) << ',' << to_string(r.topology) << ',' << r.size << ',' << format_real(r.lambda) << ','
        << format_real(r.v) << ',' << r.transfer.token() << ',' << seed_field(r) << ',' << r.metric << ','
        << (r.value ? format_real(*r.value) : std::string("FAIL")) << ',' << format_real(r.max_abs_state) << '\n';
  }
}

void write_csv(const std::vector<ExperimentResult>& results, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  write_csv(results, out);
  finish(out, path);
}

std::vector<CsvRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw Error(ErrorKind::IoError, path.string() + ": missing or unexpected header");
  }
  std::vector<CsvRecord> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) {
      throw Error(ErrorKind::IoError, path.string() + ":" + std::to_string(number) + ": expected 10 fields");
    }
    CsvRecord r;
    r.task = f[0];
    r.topology = f[1];
    r.size = static_cast<int>(parse_real(f[2], path, number));
    r.lambda = parse_real(f[3], path, number);
    r.v = parse_real(f[4], path, number);
    r.transfer = f[5];
    r.seed = f[6];
    r.metric = f[7];
    if (f[8] != "FAIL") r.value = parse_real(f[8], path, number);
    r.max_abs_state = parse_real(f[9], path, number);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_weights_csv(const ExperimentConfig& config, const std::vector<RunWeights>& weights,
                       const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "task,v,transfer,seed,lambda,target,index,weight\n";
  for (const RunWeights& w : weights) {
    for (Eigen::Index k = 0; k < w.weights.rows(); ++k)
      for (Eigen::Index j = 0; j < w.weights.cols(); ++j)
        out << to_string(config.task) << ',' << format_real(w.v) << ',' << w.transfer.token() << ',' << w.seed_index
            << ',' << format_real(w.lambda) << ',' << k << ',' << j << ',' << format_real(w.weights(k, j)) << '\n';
  }
  finish(out, path);
}

void write_taylor_error_csv(int max_m, int grid_points, const std::filesystem::path& path) {
  std::vector<double> errors;
  for (int m = 1; m <= max_m; ++m) errors.push_back(rmse_to_tanh(m, grid_points));
  std::ofstream out = open_output(path);
  out << "m,rmse\n";
  for (int m = 1; m <= max_m; ++m) out << m << ',' << format_real(errors[static_cast<std::size_t>(m - 1)]) << '\n';
  finish(out, path);
}

void write_series_csv(const std::vector<double>& series, double sample_interval, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "t,x\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_real(static_cast<double>(i) * sample_interval) << ',' << format_real(series[i]) << '\n';
  finish(out, path);
}

}  // namespace esn
