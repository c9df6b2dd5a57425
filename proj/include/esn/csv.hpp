#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esn/harness.hpp"

namespace esn {

/// Fixed column order of result files.
inline constexpr const char* kResultsHeader = "task,topology,N,lambda,v,transfer,seed,metric,value,max_abs_state";

/// %.17g, which round-trips every finite double.
std::string format_real(double value);

void write_csv(const std::vector<ExperimentResult>& results, std::ostream& out);
void write_csv(const std::vector<ExperimentResult>& results, const std::filesystem::path& path);

/// Row of a results file as text fields, with numeric columns parsed.
struct CsvRecord {
  std::string task;
  std::string topology;
  int size = 0;
  double lambda = 0.0;
  double v = 0.0;
  std::string transfer;
  std::string seed;
  std::string metric;
  std::optional<double> value;
  double max_abs_state = 0.0;
};

/// Throws IoError (with the path) on unreadable files and on rows that do
/// not match the header.
std::vector<CsvRecord> read_csv(const std::filesystem::path& path);

/// Long-format readout weights: task,v,transfer,seed,lambda,target,index,weight.
void write_weights_csv(const ExperimentConfig& config, const std::vector<RunWeights>& weights,
                       const std::filesystem::path& path);

/// m,rmse for m = 1..max_m.
void write_taylor_error_csv(int max_m, int grid_points, const std::filesystem::path& path);

/// t,x for a raw Mackey-Glass series.
void write_series_csv(const std::vector<double>& series, double sample_interval, const std::filesystem::path& path);

}  // namespace esn
