#include "reshqcnn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "reshqcnn/errors.hpp"

namespace fs = std::filesystem;

namespace reshqcnn {

// ---------------------------------------------------------------------------
// ExperimentConfig

void ExperimentConfig::validate() const {
  const Architecture a = Architecture::parse(arch);
  if (n < 1) throw ConfigError("n must be at least 1");
  if (s < 0 || s > n) throw ConfigError("need 0 <= s <= n");
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (epochs < 0) throw ConfigError("epochs must be non-negative");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (topology == Topology::custom) throw ConfigError("the harness builds line or cluster graphs");
  if (k_mode == KMode::analytic && a.hidden_layers() > 2) {
    throw ConfigError("analytic mode supports at most two hidden layers; use hybrid");
  }
}

Json ExperimentConfig::to_json() const {
  return Json{{"arch", arch},
              {"topology", to_string(topology)},
              {"n", n},
              {"s", s},
              {"gamma", gamma},
              {"epsilon", epsilon},
              {"eta", eta},
              {"epochs", epochs},
              {"seeds", seeds},
              {"delta", delta},
              {"k_mode", to_string(k_mode)},
              {"out", out},
              {"record_wall_time", record_wall_time}};
}

ExperimentConfig ExperimentConfig::from_json(const Json& j, ExperimentConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    try {
      if (key == "arch") base.arch = v.get<std::string>();
      else if (key == "topology") base.topology = parse_topology(v.get<std::string>());
      else if (key == "n") base.n = v.get<int>();
      else if (key == "s") base.s = v.get<int>();
      else if (key == "gamma") base.gamma = v.get<double>();
      else if (key == "epsilon") base.epsilon = v.get<double>();
      else if (key == "eta") base.eta = v.get<double>();
      else if (key == "epochs") base.epochs = v.get<int>();
      else if (key == "seeds") base.seeds = v.get<std::vector<std::uint64_t>>();
      else if (key == "delta") base.delta = v.get<double>();
      else if (key == "k_mode") base.k_mode = parse_k_mode(v.get<std::string>());
      else if (key == "out") base.out = v.get<std::string>();
      else if (key == "record_wall_time") base.record_wall_time = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    } catch (const Json::exception& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  }
  return base;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  return from_json(j, ExperimentConfig{});
}

TrainingConfig ExperimentConfig::training(std::uint64_t seed) const {
  TrainingConfig tc;
  tc.eta = eta;
  tc.epsilon = epsilon;
  tc.gamma = gamma;
  tc.epochs = epochs;
  tc.seed = seed;
  tc.k_mode = k_mode;
  tc.record_wall_time = record_wall_time;
  return tc;
}

std::string default_output_root() {
  if (const char* env = std::getenv("RESHQCNN_OUT"); env && *env) return env;
  return "runs";
}

// ---------------------------------------------------------------------------
// gen-data / train

namespace {

GraphDataset make_dataset(const ExperimentConfig& config, std::uint64_t seed) {
  const Architecture arch = Architecture::parse(config.arch);
  const GraphSpec spec = build_graph_spec(config.topology, config.n, config.s);
  Rng rng = make_rng(seed, kDataStream);
  GraphDataset ds = generate_dataset(spec, arch.input_width(), config.delta, rng);
  ds.seed = seed;
  return ds;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

GenDataResult cmd_gen_data(const ExperimentConfig& config, std::uint64_t seed,
                           const fs::path& file) {
  config.validate();
  GenDataResult res;
  res.dataset = make_dataset(config, seed);
  const std::string text = dump(dataset_to_json(res.dataset));
  write_file(file, text);
  res.path = file;
  res.digest = content_digest(text);
  return res;
}

TrainResult cmd_train(const ExperimentConfig& config, std::uint64_t seed,
                      const GraphDataset& dataset, const fs::path& out_dir) {
  config.validate();
  const Architecture arch = Architecture::parse(config.arch);
  if (dataset.input_qubits != arch.input_width()) {
    throw DimensionError("dataset has " + std::to_string(dataset.input_qubits) +
                         "-qubit inputs but architecture " + arch.to_string() + " expects " +
                         std::to_string(arch.input_width()));
  }
  TrainResult res;
  res.trace = train(arch, dataset, config.training(seed));

  fs::create_directories(out_dir);
  res.csv = out_dir / "trace.csv";
  res.checkpoint = out_dir / "checkpoint.json";
  write_file(res.csv, trace_to_csv(res.trace));

  Json extra{{"epochs", config.epochs}, {"gamma", config.gamma},
             {"graph_calibration", graph_calibration(arch)}};
  extra["plateau_epoch"] =
      res.trace.plateau_epoch ? Json(*res.trace.plateau_epoch) : Json(nullptr);
  write_file(res.checkpoint,
             dump(checkpoint_to_json(arch, seed, res.trace.final_unitaries, extra)));

  Json effective = config.to_json();
  effective["seed"] = seed;
  write_file(out_dir / "config.json", dump(effective));
  return res;
}

// ---------------------------------------------------------------------------
// sweep

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::gamma:
      return "gamma";
    case SweepAxis::s:
      return "s";
    case SweepAxis::arch:
      return "arch";
  }
  return "gamma";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  if (text == "gamma") return SweepAxis::gamma;
  if (text == "s") return SweepAxis::s;
  if (text == "arch") return SweepAxis::arch;
  throw ConfigError("unknown sweep axis '" + std::string(text) + "'");
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (xs.empty()) return {nan, nan};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, nan};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return {mean, sd / std::sqrt(static_cast<double>(xs.size()))};
}

namespace {

ExperimentConfig with_value(ExperimentConfig c, SweepAxis axis, const std::string& value) {
  try {
    switch (axis) {
      case SweepAxis::gamma:
        c.gamma = std::stod(value);
        break;
      case SweepAxis::s:
        c.s = std::stoi(value);
        break;
      case SweepAxis::arch:
        c.arch = value;
        break;
    }
  } catch (const std::logic_error&) {
    throw ConfigError("bad sweep value '" + value + "' for axis " + to_string(axis));
  }
  return c;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SweepResult cmd_sweep(const ExperimentConfig& base, SweepAxis axis,
                      const std::vector<std::string>& values,
                      const std::vector<std::uint64_t>& seeds, const fs::path& out_dir) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");

  SweepResult result;
  result.axis = axis;
  const std::size_t nv = values.size();
  const std::size_t ns = seeds.size();
  result.cells.resize(nv * ns);

  const long total = static_cast<long>(nv * ns);
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < total; ++idx) {
    const std::size_t vi = static_cast<std::size_t>(idx) / ns;
    const std::size_t si = static_cast<std::size_t>(idx) % ns;
    SweepCell& cell = result.cells[idx];
    cell.variant = values[vi];
    cell.seed = seeds[si];
    const fs::path dir =
        out_dir / "cells" / ("v" + std::to_string(vi) + "_seed" + std::to_string(seeds[si]));
    try {
      ExperimentConfig cfg = with_value(base, axis, values[vi]);
      cfg.seeds = {seeds[si]};
      const GenDataResult data = cmd_gen_data(cfg, seeds[si], dir / "dataset.json");
      const TrainResult run = cmd_train(cfg, seeds[si], data.dataset, dir);
      cell.final_cost = run.trace.epochs.empty() ? run.trace.initial
                                                 : run.trace.epochs.back().cost;
      cell.csv = run.csv;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.ok = false;
      cell.error = e.what();
    }
  }

  std::string csv = "variant,runs,failures,mean_c_test,stderr_c_test\n";
  Json cells_json = Json::array();
  for (std::size_t vi = 0; vi < nv; ++vi) {
    SweepAggregate agg;
    agg.variant = values[vi];
    std::vector<double> finals;
    for (std::size_t si = 0; si < ns; ++si) {
      const SweepCell& cell = result.cells[vi * ns + si];
      if (cell.ok) {
        finals.push_back(cell.final_cost.c_test);
        ++agg.runs;
      } else {
        ++agg.failures;
      }
      Json cj{{"variant", cell.variant}, {"seed", cell.seed}, {"ok", cell.ok}};
      if (cell.ok) {
        cj["c_sv"] = cell.final_cost.c_sv;
        cj["c_g"] = cell.final_cost.c_g;
        cj["c_full"] = cell.final_cost.c_full;
        cj["c_test"] = cell.final_cost.c_test;
        cj["csv"] = fs::relative(cell.csv, out_dir).generic_string();
      } else {
        cj["error"] = cell.error;
      }
      cells_json.push_back(std::move(cj));
    }
    std::tie(agg.mean_c_test, agg.stderr_c_test) = mean_and_stderr(finals);
    csv += "\"" + agg.variant + "\"," + std::to_string(agg.runs) + "," +
           std::to_string(agg.failures) + "," + format_double(agg.mean_c_test) + "," +
           format_double(agg.stderr_c_test) + "\n";
    result.aggregates.push_back(agg);
  }

  Json aggs = Json::array();
  for (const auto& a : result.aggregates) {
    aggs.push_back({{"variant", a.variant},
                    {"runs", a.runs},
                    {"failures", a.failures},
                    {"mean_c_test", std::isnan(a.mean_c_test) ? Json(nullptr) : Json(a.mean_c_test)},
                    {"stderr_c_test",
                     std::isnan(a.stderr_c_test) ? Json(nullptr) : Json(a.stderr_c_test)}});
  }
  Json summary{{"axis", to_string(axis)},
               {"values", values},
               {"seeds", seeds},
               {"base", base.to_json()},
               {"cells", cells_json},
               {"aggregates", aggs}};
  write_file(out_dir / "sweep.csv", csv);
  write_file(out_dir / "sweep.json", dump(summary));
  return result;
}

// ---------------------------------------------------------------------------
// plot

namespace {

constexpr const char* kPalette[] = {"#000000", "#1f4fbf", "#8b4513", "#2e8b57",
                                    "#c0392b", "#7d3c98", "#d68910", "#17a589"};

std::string fmt2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 60, kRight = 190, kTop = 20, kBottom = 50;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;

  int max_epoch = 1;
  for (const auto& s : series)
    for (const auto& r : s.rows) max_epoch = std::max(max_epoch, r.epoch);
  auto px = [&](double epoch) { return kLeft + pw * epoch / max_epoch; };
  auto py = [&](double v) { return kTop + ph * (1.0 - std::clamp(v, 0.0, 1.0)); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" fill=\"#ffffff\"/>\n";
  // Axes.
  o << "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
  o << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kTop + ph) << "\" x2=\""
    << fmt2(kLeft + pw) << "\" y2=\"" << fmt2(kTop + ph) << "\"/>\n";
  o << "<line x1=\"" << fmt2(kLeft) << "\" y1=\"" << fmt2(kTop) << "\" x2=\"" << fmt2(kLeft)
    << "\" y2=\"" << fmt2(kTop + ph) << "\"/>\n";
  o << "</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = 0.25 * k;
    o << "<text x=\"" << fmt2(kLeft - 6) << "\" y=\"" << fmt2(py(v) + 4)
      << "\" text-anchor=\"end\">" << fmt2(v) << "</text>\n";
    const int e = static_cast<int>(std::lround(max_epoch * k / 4.0));
    o << "<text x=\"" << fmt2(px(e)) << "\" y=\"" << fmt2(kTop + ph + 16)
      << "\" text-anchor=\"middle\">" << e << "</text>\n";
  }
  o << "<text x=\"" << fmt2(kLeft + pw / 2) << "\" y=\"" << fmt2(kHeight - 10)
    << "\" text-anchor=\"middle\">epoch</text>\n";
  o << "<text x=\"14\" y=\"" << fmt2(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << fmt2(kTop + ph / 2) << ")\">C_USV</text>\n";
  o << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (s.dashed) o << " stroke-dasharray=\"6,4\"";
    o << " points=\"";
    bool first = true;
    for (const auto& r : s.rows) {
      if (!std::isfinite(r.c_test)) continue;
      if (!first) o << ' ';
      o << fmt2(px(r.epoch)) << ',' << fmt2(py(r.c_test));
      first = false;
    }
    o << "\"/>\n";
  }

  o << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const double y = kTop + 14 + 20.0 * static_cast<double>(i);
    const double x = kLeft + pw + 16;
    o << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(x + 28)
      << "\" y2=\"" << fmt2(y) << "\" stroke=\"" << kPalette[i % std::size(kPalette)]
      << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    o << "<text x=\"" << fmt2(x + 34) << "\" y=\"" << fmt2(y + 4) << "\" fill=\"#333333\">"
      << xml_escape(s.label) << "</text>\n";
  }
  o << "</g>\n</svg>\n";
  return o.str();
}

std::string cmd_plot(const std::vector<fs::path>& csvs, std::vector<std::string> labels,
                     std::vector<std::string> styles, const fs::path& svg_out) {
  if (csvs.empty()) throw std::runtime_error("plot needs at least one CSV");
  if (labels.empty()) {
    for (const auto& p : csvs) labels.push_back(p.stem().string());
  }
  if (styles.empty()) styles.assign(csvs.size(), "solid");
  if (labels.size() != csvs.size() || styles.size() != csvs.size()) {
    throw std::runtime_error("labels and styles must match the number of CSVs");
  }
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < csvs.size(); ++i) {
    PlotSeries s;
    s.label = labels[i];
    if (styles[i] == "dashed") {
      s.dashed = true;
    } else if (styles[i] != "solid") {
      throw std::runtime_error("style must be solid or dashed, got '" + styles[i] + "'");
    }
    s.rows = parse_trace_csv(read_file(csvs[i]));
    series.push_back(std::move(s));
  }
  const std::string svg = render_svg(series);
  write_file(svg_out, svg);
  return svg;
}

}  // namespace reshqcnn
