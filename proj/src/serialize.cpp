#include "reshqcnn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "reshqcnn/errors.hpp"

namespace reshqcnn {

Json matrix_to_json(const ComplexMatrix& m) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back({m(i, j).real(), m(i, j).imag()});
  return arr;
}

ComplexMatrix matrix_from_json(const Json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) {
    throw DimensionError("matrix JSON has the wrong number of entries");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = j[static_cast<std::size_t>(i * cols + c)];
      m(i, c) = Complex{e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back({v(i).real(), v(i).imag()});
  return arr;
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_array()) throw DimensionError("state JSON must be an array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = Complex{j[i].at(0).get<double>(), j[i].at(1).get<double>()};
  }
  return v;
}

Json dataset_to_json(const GraphDataset& ds) {
  Json edges = Json::array();
  for (auto [v, w] : ds.spec.edges) edges.push_back({v, w});
  Json states = Json::array();
  for (const auto& p : ds.inputs) states.push_back(vector_to_json(p.amplitudes()));
  return Json{
      {"spec",
       {{"topology", to_string(ds.spec.topology)},
        {"num_vertices", ds.spec.num_vertices},
        {"edges", edges}}},
      {"seed", ds.seed},
      {"delta", ds.delta},
      {"m0", ds.input_qubits},
      {"states", states},
      {"V", matrix_to_json(ds.target_unitary.matrix())},
      {"supervised_indices", ds.spec.supervised},
  };
}

GraphDataset dataset_from_json(const Json& j) {
  GraphDataset ds;
  const Json& spec = j.at("spec");
  ds.spec.topology = parse_topology(spec.at("topology").get<std::string>());
  ds.spec.num_vertices = spec.at("num_vertices").get<int>();
  for (const auto& e : spec.at("edges")) {
    ds.spec.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  ds.spec.supervised = j.at("supervised_indices").get<std::vector<int>>();
  ds.spec.validate();
  ds.seed = j.at("seed").get<std::uint64_t>();
  ds.delta = j.at("delta").get<double>();
  ds.input_qubits = j.at("m0").get<int>();
  const Eigen::Index dim = Eigen::Index{1} << ds.input_qubits;
  const Json& states = j.at("states");
  if (static_cast<int>(states.size()) != ds.spec.num_vertices) {
    throw DimensionError("dataset state count does not match num_vertices");
  }
  for (const auto& s : states) {
    ComplexVector v = vector_from_json(s);
    if (v.size() != dim) throw DimensionError("dataset state has the wrong dimension");
    ds.inputs.emplace_back(std::move(v));
  }
  ds.target_unitary = UnitaryMatrix(matrix_from_json(j.at("V"), dim, dim));
  for (int x : ds.spec.supervised) {
    ds.supervised_targets.push_back(apply_unitary(ds.target_unitary, ds.inputs[x]));
  }
  for (int x : ds.spec.test_indices()) {
    ds.test_targets.push_back(apply_unitary(ds.target_unitary, ds.inputs[x]));
  }
  ds.adjacency = adjacency_from_edges(ds.spec.num_vertices, ds.spec.edges);
  return ds;
}

Json checkpoint_to_json(const Architecture& arch, std::uint64_t seed, const LayerUnitaries& u,
                        const Json& extra) {
  Json layers = Json::array();
  for (const auto& layer : u.layers) {
    Json lj = Json::array();
    for (const auto& unitary : layer) lj.push_back(matrix_to_json(unitary.matrix()));
    layers.push_back(std::move(lj));
  }
  Json j{{"arch", arch.to_string()}, {"seed", seed}, {"layers", std::move(layers)}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

LayerUnitaries checkpoint_unitaries(const Json& j, Architecture* arch_out) {
  const Architecture arch = Architecture::parse(j.at("arch").get<std::string>());
  const Json& layers = j.at("layers");
  if (static_cast<int>(layers.size()) != arch.num_layers()) {
    throw DimensionError("checkpoint layer count does not match its architecture");
  }
  LayerUnitaries u;
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const Eigen::Index d = Eigen::Index{1} << (arch.widths[l - 1] + 1);
    std::vector<UnitaryMatrix> layer;
    for (const auto& m : layers[l - 1]) layer.emplace_back(matrix_from_json(m, d, d));
    u.layers.push_back(std::move(layer));
  }
  u.check_shape(arch);
  if (arch_out) *arch_out = arch;
  return u;
}

namespace {

constexpr const char* kTraceHeader = "epoch,c_sv,c_g,c_full,c_test,wall_ms";

void append_number(std::string& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out += buf;
}

}  // namespace

std::string trace_to_csv(const TrainingTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& e : trace.epochs) {
    out += std::to_string(e.epoch);
    for (double x : {e.cost.c_sv, e.cost.c_g, e.cost.c_full, e.cost.c_test}) {
      out += ',';
      append_number(out, x);
    }
    out += ',';
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", e.wall_ms);
    out += buf;
    out += '\n';
  }
  return out;
}

std::vector<TraceRow> parse_trace_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw std::runtime_error("unexpected trace CSV header: " + line);
  std::vector<TraceRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) {
      throw std::runtime_error("trace CSV line " + std::to_string(lineno) + " has " +
                               std::to_string(cells.size()) + " fields");
    }
    TraceRow r;
    try {
      std::size_t used = 0;
      r.epoch = std::stoi(cells[0], &used);
      if (used != cells[0].size()) throw std::invalid_argument("epoch");
      double* fields[] = {&r.c_sv, &r.c_g, &r.c_full, &r.c_test, &r.wall_ms};
      for (int k = 0; k < 5; ++k) {
        *fields[k] = std::stod(cells[k + 1], &used);
        if (used != cells[k + 1].size()) throw std::invalid_argument("number");
      }
    } catch (const std::exception&) {
      throw std::runtime_error("trace CSV line " + std::to_string(lineno) + " is malformed");
    }
    rows.push_back(r);
  }
  return rows;
}

std::string content_digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view contents) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace reshqcnn
