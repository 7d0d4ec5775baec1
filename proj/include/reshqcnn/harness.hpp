#pragma once

// Experiment runner behind the command-line tool: dataset generation,
// single training runs, seed sweeps with error bars and SVG loss curves.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reshqcnn/serialize.hpp"

namespace reshqcnn {

struct ExperimentConfig {
  std::string arch = "2,~3,2";
  Topology topology = Topology::line;
  int n = 8;
  int s = 3;
  double gamma = -0.5;
  double epsilon = 0.01;
  double eta = 1.0;
  int epochs = 250;
  std::vector<std::uint64_t> seeds{1};
  double delta = 0.3;
  KMode k_mode = KMode::hybrid;
  std::string out = "runs";
  bool record_wall_time = true;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  Json to_json() const;
  /// Fields present in `j` override those of `base`; unknown keys are errors.
  static ExperimentConfig from_json(const Json& j, ExperimentConfig base);
  static ExperimentConfig from_json(const Json& j);

  TrainingConfig training(std::uint64_t seed) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Default output root: $RESHQCNN_OUT when set, otherwise "runs".
std::string default_output_root();

struct GenDataResult {
  std::filesystem::path path;
  std::string digest;
  GraphDataset dataset;
};

/// Builds the graph spec from the config, samples with `seed` and writes the
/// dataset JSON to `file`.
GenDataResult cmd_gen_data(const ExperimentConfig& config, std::uint64_t seed,
                           const std::filesystem::path& file);

struct TrainResult {
  TrainingTrace trace;
  std::filesystem::path csv;
  std::filesystem::path checkpoint;
};

/// Trains on `dataset` and writes trace.csv, checkpoint.json and the
/// effective config.json into `out_dir`. Throws DimensionError when the
/// dataset width does not match the architecture.
TrainResult cmd_train(const ExperimentConfig& config, std::uint64_t seed,
                      const GraphDataset& dataset, const std::filesystem::path& out_dir);

enum class SweepAxis { gamma, s, arch };

std::string to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepCell {
  std::string variant;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  CostReport final_cost;
  std::filesystem::path csv;
};

struct SweepAggregate {
  std::string variant;
  int runs = 0;
  int failures = 0;
  double mean_c_test = 0.0;
  double stderr_c_test = 0.0;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::gamma;
  std::vector<SweepCell> cells;
  std::vector<SweepAggregate> aggregates;
};

/// Mean and standard error (sample sd / sqrt(n)); stderr is NaN for n < 2.
std::pair<double, double> mean_and_stderr(const std::vector<double>& xs);

/// Runs every (value, seed) cell: data from the seed, then training. Each
/// cell writes its own directory under out_dir/cells; sweep.csv and
/// sweep.json summarize. Failed cells are recorded, not fatal.
SweepResult cmd_sweep(const ExperimentConfig& base, SweepAxis axis,
                      const std::vector<std::string>& values, const std::vector<std::uint64_t>& seeds,
                      const std::filesystem::path& out_dir);

struct PlotSeries {
  std::string label;
  bool dashed = false;
  std::vector<TraceRow> rows;
};

/// Self-contained SVG of c_test against epoch, one polyline per series and
/// a legend. Byte-identical for identical inputs.
std::string render_svg(const std::vector<PlotSeries>& series);

/// Reads the CSVs, labels default to file stems, styles default to solid.
/// Throws std::runtime_error on malformed CSVs or mismatched list lengths.
std::string cmd_plot(const std::vector<std::filesystem::path>& csvs,
                     std::vector<std::string> labels, std::vector<std::string> styles,
                     const std::filesystem::path& svg_out);

}  // namespace reshqcnn
