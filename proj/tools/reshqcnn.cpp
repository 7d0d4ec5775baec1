// reshqcnn: gen-data, train, sweep and plot subcommands.
//
// Precedence for every run parameter: command-line flag, then --config JSON,
// then built-in defaults. The output root defaults to $RESHQCNN_OUT or "runs".

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "reshqcnn/errors.hpp"
#include "reshqcnn/harness.hpp"

namespace fs = std::filesystem;
using namespace reshqcnn;

namespace {

// Flags shared by every run-producing subcommand. Unset optionals leave the
// config-file or default value alone.
struct RunFlags {
  std::string config_file;
  std::optional<std::string> arch, topology, k_mode;
  std::optional<int> n, s, epochs;
  std::optional<double> gamma, epsilon, eta, delta;
  bool no_wall_time = false;

  void attach(CLI::App* app, bool training) {
    app->add_option("--config", config_file, "JSON config file (flags override it)");
    app->add_option("--arch", arch, "architecture, e.g. 2,~3,2 (~ marks a residual layer)");
    app->add_option("--topology", topology, "line or clusters");
    app->add_option("--n", n, "number of graph vertices");
    app->add_option("--supervised", s, "number of supervised vertices");
    app->add_option("--delta", delta, "data noise scale");
    if (!training) return;
    app->add_option("--gamma", gamma, "graph cost weight (<= 0)");
    app->add_option("--epsilon", epsilon, "update step size");
    app->add_option("--eta", eta, "generator scale");
    app->add_option("--epochs", epochs, "training epochs");
    app->add_option("--k-mode", k_mode, "analytic, hybrid or numeric");
    app->add_flag("--no-wall-time", no_wall_time, "write 0 in wall_ms for byte-stable CSVs");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    c.out = default_output_root();
    if (!config_file.empty()) c = ExperimentConfig::from_json(Json::parse(read_file(config_file)), c);
    if (arch) c.arch = *arch;
    if (topology) c.topology = parse_topology(*topology);
    if (k_mode) c.k_mode = parse_k_mode(*k_mode);
    if (n) c.n = *n;
    if (s) c.s = *s;
    if (epochs) c.epochs = *epochs;
    if (gamma) c.gamma = *gamma;
    if (epsilon) c.epsilon = *epsilon;
    if (eta) c.eta = *eta;
    if (delta) c.delta = *delta;
    if (no_wall_time) c.record_wall_time = false;
    return c;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Values for --vary arch contain commas, so arch lists are separated by ';'.
std::vector<std::string> split_values(const std::string& text, SweepAxis axis) {
  if (axis != SweepAxis::arch) return split_list(text);
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const std::uint64_t lo = std::stoull(item.substr(0, dash));
      const std::uint64_t hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw ConfigError("bad seed range " + item);
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(std::stoull(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Residual hybrid quantum-classical network simulator"};
  app.require_subcommand(1);

  RunFlags gen_flags, train_flags, sweep_flags;
  std::uint64_t gen_seed = 1, train_seed = 1;
  std::string gen_out, train_out, train_data, sweep_out, sweep_vary = "gamma", sweep_values,
      sweep_seeds = "1-8";

  auto* gen = app.add_subcommand("gen-data", "sample a graph dataset and write it as JSON");
  gen_flags.attach(gen, false);
  gen->add_option("--seed", gen_seed, "data seed");
  gen->add_option("--out", gen_out, "output file (default <root>/data/seed<seed>.json)");

  auto* trn = app.add_subcommand("train", "train one network and write trace.csv + checkpoint");
  train_flags.attach(trn, true);
  trn->add_option("--seed", train_seed, "seed for initialization (and data, without --data)");
  trn->add_option("--data", train_data, "dataset JSON from gen-data");
  trn->add_option("--out", train_out, "output directory (default <root>/train/seed<seed>)");

  auto* swp = app.add_subcommand("sweep", "train over values x seeds and aggregate C_USV");
  sweep_flags.attach(swp, true);
  swp->add_option("--vary", sweep_vary, "gamma, s or arch")->check(CLI::IsMember({"gamma", "s", "arch"}));
  swp->add_option("--values", sweep_values, "comma list; ';'-separated for arch")->required();
  swp->add_option("--seeds", sweep_seeds, "seed list, e.g. 1-8 or 1,2,5");
  swp->add_option("--out", sweep_out, "output directory (default <root>/sweep)");

  std::vector<std::string> plot_csvs, plot_labels, plot_styles;
  std::string plot_out;
  auto* plt = app.add_subcommand("plot", "render trace CSVs as an SVG of C_USV per epoch");
  plt->add_option("csvs", plot_csvs, "trace CSV files")->required();
  plt->add_option("--labels", plot_labels, "one label per CSV")->delimiter(',');
  plt->add_option("--styles", plot_styles, "solid or dashed, one per CSV")->delimiter(',');
  plt->add_option("--out", plot_out, "SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      ExperimentConfig c = gen_flags.resolve();
      const fs::path file = gen_out.empty()
                                ? fs::path(c.out) / "data" / ("seed" + std::to_string(gen_seed) + ".json")
                                : fs::path(gen_out);
      const GenDataResult r = cmd_gen_data(c, gen_seed, file);
      std::cout << r.path.string() << " " << r.digest << "\n";
    } else if (*trn) {
      ExperimentConfig c = train_flags.resolve();
      c.seeds = {train_seed};
      const GraphDataset ds =
          train_data.empty()
              ? cmd_gen_data(c, train_seed, fs::path(c.out) / "data" /
                                                ("seed" + std::to_string(train_seed) + ".json"))
                    .dataset
              : dataset_from_json(Json::parse(read_file(train_data)));
      const fs::path dir = train_out.empty()
                               ? fs::path(c.out) / "train" / ("seed" + std::to_string(train_seed))
                               : fs::path(train_out);
      const TrainResult r = cmd_train(c, train_seed, ds, dir);
      const CostReport& last = r.trace.epochs.empty() ? r.trace.initial : r.trace.epochs.back().cost;
      std::printf("%s c_full=%.6f c_test=%.6f\n", r.csv.string().c_str(), last.c_full, last.c_test);
    } else if (*swp) {
      ExperimentConfig c = sweep_flags.resolve();
      const SweepAxis axis = parse_sweep_axis(sweep_vary);
      const auto seeds = parse_seeds(sweep_seeds);
      const fs::path dir = sweep_out.empty() ? fs::path(c.out) / "sweep" : fs::path(sweep_out);
      const SweepResult r = cmd_sweep(c, axis, split_values(sweep_values, axis), seeds, dir);
      int failures = 0;
      for (const auto& a : r.aggregates) {
        std::printf("%-16s runs=%d failures=%d mean_c_test=%.6f stderr=%.6f\n", a.variant.c_str(),
                    a.runs, a.failures, a.mean_c_test, a.stderr_c_test);
        failures += a.failures;
      }
      for (const auto& cell : r.cells) {
        if (!cell.ok) std::cerr << "cell " << cell.variant << " seed " << cell.seed << ": " << cell.error << "\n";
      }
      std::cout << (dir / "sweep.csv").string() << "\n";
      return failures == 0 ? 0 : 3;
    } else if (*plt) {
      std::vector<fs::path> csvs(plot_csvs.begin(), plot_csvs.end());
      cmd_plot(csvs, plot_labels, plot_styles, plot_out);
      std::cout << plot_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
