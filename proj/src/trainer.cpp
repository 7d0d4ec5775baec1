#include "reshqcnn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "reshqcnn/errors.hpp"
#include "reshqcnn/kernels.hpp"

namespace reshqcnn {

// ---------------------------------------------------------------------------
// UpdateGenerators

UpdateGenerators UpdateGenerators::zeros(const Architecture& arch) {
  UpdateGenerators g;
  g.k.resize(arch.num_layers());
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const Eigen::Index d = Eigen::Index{1} << (arch.widths[l - 1] + 1);
    g.k[l - 1].assign(arch.widths[l], ComplexMatrix::Zero(d, d));
  }
  return g;
}

void UpdateGenerators::check_same_shape(const UpdateGenerators& other) const {
  if (k.size() != other.k.size()) throw DimensionError("generator layer counts differ");
  for (std::size_t l = 0; l < k.size(); ++l) {
    if (k[l].size() != other.k[l].size()) throw DimensionError("generator widths differ");
    for (std::size_t j = 0; j < k[l].size(); ++j) {
      if (k[l][j].rows() != other.k[l][j].rows()) {
        throw DimensionError("generator dimensions differ");
      }
    }
  }
}

UpdateGenerators& UpdateGenerators::add_scaled(const UpdateGenerators& other, double scale) {
  check_same_shape(other);
  for (std::size_t l = 0; l < k.size(); ++l)
    for (std::size_t j = 0; j < k[l].size(); ++j) k[l][j] += scale * other.k[l][j];
  return *this;
}

UpdateGenerators UpdateGenerators::scaled(double scale) const {
  UpdateGenerators out = *this;
  for (auto& layer : out.k)
    for (auto& m : layer) m *= scale;
  return out;
}

double UpdateGenerators::max_hermiticity_defect() const {
  double worst = 0.0;
  for (const auto& layer : k)
    for (const auto& m : layer) worst = std::max(worst, hermiticity_defect(m));
  return worst;
}

std::string to_string(KMode m) {
  switch (m) {
    case KMode::analytic:
      return "analytic";
    case KMode::numeric:
      return "numeric";
    case KMode::hybrid:
      return "hybrid";
  }
  return "hybrid";
}

KMode parse_k_mode(std::string_view text) {
  if (text == "analytic") return KMode::analytic;
  if (text == "numeric") return KMode::numeric;
  if (text == "hybrid") return KMode::hybrid;
  throw ConfigError("unknown k_mode '" + std::string(text) + "'");
}

TrainingData TrainingData::from_dataset(const GraphDataset& ds) {
  TrainingData d;
  d.vertex_inputs.reserve(ds.inputs.size());
  for (const auto& p : ds.inputs) d.vertex_inputs.push_back(density_of(p));
  d.supervised = ds.spec.supervised;
  d.supervised_targets = ds.supervised_targets;
  d.test = ds.spec.test_indices();
  d.test_targets = ds.test_targets;
  d.adjacency = ds.adjacency;
  return d;
}

void TrainingConfig::validate() const {
  if (!(eta > 0.0)) throw ConfigError("learning rate eta must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("step size epsilon must be positive");
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  if (epochs < 0) throw ConfigError("epoch count must be non-negative");
  if (!(oracle_step >= 1e-7 && oracle_step <= 1e-3)) {
    throw ConfigError("oracle step must lie in [1e-7, 1e-3]");
  }
}

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5eedu};
  return Rng(seq);
}

double graph_calibration(const Architecture& arch) {
  return std::ldexp(1.0, 1 - arch.residual_blocks());
}

// ---------------------------------------------------------------------------
// Commutator terms

namespace {

// Adds weight * i tr_rest [B_j, Y_j] to out[j] for every perceptron of one
// layer, where B_j = U_j..U_1 (forward_in (x) |0..0><0..0|) U_1^+..U_j^+ and
// Y_j = U_{j+1}^+..U_m^+ (I (x) observable) U_m..U_{j+1}.
void accumulate_layer_term(std::vector<ComplexMatrix>& out, const std::vector<UnitaryMatrix>& layer,
                           int m_prev, int m_l, const ComplexMatrix& forward_in,
                           const ComplexMatrix& observable, double weight) {
  const int n = m_prev + m_l;
  std::vector<ComplexMatrix> backward(m_l);
  backward[m_l - 1] = kernels::identity_kron(m_prev, observable);
  for (int j = m_l - 1; j >= 1; --j) {
    backward[j - 1] = backward[j];
    kernels::conjugate_adjoint(backward[j - 1], layer[j].matrix(),
                               kernels::perceptron_support(m_prev, j), n);
  }
  ComplexMatrix fwd = kernels::pad_zero(forward_in, m_l);
  const Complex iw{0.0, weight};
  for (int j = 0; j < m_l; ++j) {
    const auto support = kernels::perceptron_support(m_prev, j);
    kernels::conjugate(fwd, layer[j].matrix(), support, n);
    const ComplexMatrix comm = fwd * backward[j] - backward[j] * fwd;
    out[j] += iw * kernels::partial_trace(comm, n, support);
  }
}

// Intermediates of one forward pass (or a difference of two) plus the
// observable the cost applies to its output.
struct PathItem {
  std::vector<ComplexMatrix> layer_in;
  std::vector<ComplexMatrix> layer_out;
  ComplexMatrix observable;
  double weight = 0.0;
};

PathItem item_from_record(const ForwardRecord& rec, ComplexMatrix observable, double weight) {
  PathItem item;
  for (const auto& s : rec.layer_in) item.layer_in.push_back(s.matrix());
  for (const auto& s : rec.layer_out) item.layer_out.push_back(s.matrix());
  item.observable = std::move(observable);
  item.weight = weight;
  return item;
}

PathItem item_from_difference(const ForwardRecord& a, const ForwardRecord& b, double weight) {
  PathItem item;
  for (std::size_t k = 0; k < a.layer_in.size(); ++k) {
    item.layer_in.push_back(a.layer_in[k].matrix() - b.layer_in[k].matrix());
  }
  for (std::size_t k = 0; k < a.layer_out.size(); ++k) {
    item.layer_out.push_back(a.layer_out[k].matrix() - b.layer_out[k].matrix());
  }
  item.observable = item.layer_out.back();
  item.weight = weight;
  return item;
}

// Explicit forward/backward pairs, path by path, for networks with at most
// two hidden layers.
void explicit_terms(const Architecture& arch, const LayerUnitaries& u, const PathItem& it,
                    UpdateGenerators& out) {
  const auto& w = arch.widths;
  const ComplexMatrix& obs = it.observable;
  auto term = [&](int l, const ComplexMatrix& fwd, const ComplexMatrix& x) {
    accumulate_layer_term(out.k[l - 1], u.layers[l - 1], w[l - 1], w[l], fwd, x, it.weight);
  };

  switch (arch.hidden_layers()) {
    case 0:
      term(1, it.layer_in[0], obs);
      break;
    case 1: {
      const bool r1 = arch.has_residual(1);
      // Layer 1, M: input forward, observable pulled back through layer 2.
      term(1, it.layer_in[0], layer_adjoint(obs, u.layers[1], w[1], w[2]));
      // Layer 2, M: the hidden output; N: the shortcut copy of the input.
      term(2, it.layer_out[0], obs);
      if (r1) term(2, kernels::pad_zero(it.layer_in[0], arch.delta(1)), obs);
      break;
    }
    case 2: {
      const bool r1 = arch.has_residual(1);
      const bool r2 = arch.has_residual(2);
      const ComplexMatrix back3 = layer_adjoint(obs, u.layers[2], w[2], w[3]);
      // Layer 1, M: back through layers 3 and 2; P: around layer 2.
      term(1, it.layer_in[0], layer_adjoint(back3, u.layers[1], w[1], w[2]));
      if (r2) term(1, it.layer_in[0], kernels::project_zero(back3, arch.delta(2)));
      // Layer 2, M: first hidden output; Q: shortcut of the input.
      term(2, it.layer_out[0], back3);
      if (r1) term(2, kernels::pad_zero(it.layer_in[0], arch.delta(1)), back3);
      // Layer 3, M: second hidden output; S: input through both shortcuts;
      // T: first hidden output around layer 2.
      term(3, it.layer_out[1], obs);
      if (r1 && r2) {
        term(3, kernels::pad_zero(it.layer_in[0], arch.delta(1) + arch.delta(2)), obs);
      }
      if (r2) term(3, kernels::pad_zero(it.layer_out[0], arch.delta(2)), obs);
      break;
    }
    default:
      throw ConfigError("explicit update formulas cover at most two hidden layers");
  }
}

// Single backward sweep: the observable on each layer output is the
// observable on the next layer input; shortcuts add a projected copy.
void recursive_terms(const Architecture& arch, const LayerUnitaries& u, const PathItem& it,
                     UpdateGenerators& out) {
  const auto& w = arch.widths;
  const int layers = arch.num_layers();
  ComplexMatrix out_obs = it.observable;  // on rho^{l_out}
  ComplexMatrix next_in_obs;              // on rho^{(l+1)_in}
  for (int l = layers; l >= 1; --l) {
    accumulate_layer_term(out.k[l - 1], u.layers[l - 1], w[l - 1], w[l], it.layer_in[l - 1],
                          out_obs, it.weight);
    if (l == 1) break;
    ComplexMatrix in_obs = layer_adjoint(out_obs, u.layers[l - 1], w[l - 1], w[l]);
    if (arch.has_residual(l)) in_obs += kernels::project_zero(next_in_obs, arch.delta(l));
    next_in_obs = in_obs;
    out_obs = std::move(in_obs);
  }
}

void apply_prefactor(const Architecture& arch, double eta, UpdateGenerators& g) {
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const double pre = eta * std::ldexp(1.0, arch.widths[l - 1]);
    for (auto& m : g.k[l - 1]) {
      m *= pre;
      m = (0.5 * (m + m.adjoint())).eval();
    }
  }
}

template <class TermFn>
UpdateGenerators assemble(const Architecture& arch, const LayerUnitaries& u,
                          const std::vector<PathItem>& items, double eta, TermFn&& fn) {
  std::vector<UpdateGenerators> partial(items.size());
  const long count = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    partial[i] = UpdateGenerators::zeros(arch);
    fn(arch, u, items[i], partial[i]);
  }
  UpdateGenerators total = UpdateGenerators::zeros(arch);
  for (const auto& p : partial) total.add_scaled(p, 1.0);  // fixed order: deterministic
  apply_prefactor(arch, eta, total);
  return total;
}

std::vector<ForwardRecord> forward_many(const Architecture& arch, const LayerUnitaries& u,
                                        std::span<const OperatorState> inputs) {
  std::vector<ForwardRecord> recs(inputs.size());
  const long count = static_cast<long>(inputs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) recs[i] = forward(arch, u, inputs[i]);
  return recs;
}

std::vector<PathItem> supervised_items(const Architecture& arch,
                                       std::span<const ForwardRecord> records,
                                       std::span<const PureState> targets) {
  std::vector<PathItem> items;
  if (targets.empty()) return items;
  const double weight =
      1.0 / (std::ldexp(1.0, arch.residual_blocks()) * static_cast<double>(targets.size()));
  for (std::size_t x = 0; x < targets.size(); ++x) {
    const ComplexVector& phi = targets[x].amplitudes();
    items.push_back(item_from_record(records[x], phi * phi.adjoint(), weight));
  }
  return items;
}

std::vector<PathItem> graph_items(std::span<const ForwardRecord> records,
                                  const AdjacencyMatrix& adjacency, double weight_per_edge) {
  std::vector<PathItem> items;
  for (int v = 0; v < adjacency.size(); ++v) {
    for (int w = v + 1; w < adjacency.size(); ++w) {
      const double a = adjacency(v, w);
      if (a != 0.0) items.push_back(item_from_difference(records[v], records[w], weight_per_edge * a));
    }
  }
  return items;
}

void check_inputs(const Architecture& arch, const LayerUnitaries& u,
                  std::span<const OperatorState> inputs) {
  arch.validate();
  u.check_shape(arch);
  for (const auto& s : inputs) {
    if (s.num_qubits() != arch.input_width()) {
      throw DimensionError("input state width does not match the architecture");
    }
  }
}

void require_hidden(const Architecture& arch, int lo, int hi, const char* what) {
  if (arch.hidden_layers() < lo || arch.hidden_layers() > hi) {
    throw ConfigError(std::string(what) + ": architecture " + arch.to_string() +
                      " is outside this formula's family");
  }
}

UpdateGenerators supervised_explicit(const Architecture& arch, const LayerUnitaries& u,
                                     std::span<const OperatorState> inputs,
                                     std::span<const PureState> targets, double eta) {
  if (inputs.size() != targets.size()) {
    throw DimensionError("supervised inputs and targets differ in length");
  }
  check_inputs(arch, u, inputs);
  const auto records = forward_many(arch, u, inputs);
  return assemble(arch, u, supervised_items(arch, records, targets), eta, explicit_terms);
}

UpdateGenerators graph_explicit(const Architecture& arch, const LayerUnitaries& u,
                                std::span<const OperatorState> vertex_inputs,
                                const AdjacencyMatrix& adjacency, double eta) {
  if (static_cast<int>(vertex_inputs.size()) != adjacency.size()) {
    throw DimensionError("adjacency size does not match the vertex count");
  }
  check_inputs(arch, u, vertex_inputs);
  const auto records = forward_many(arch, u, vertex_inputs);
  // Prefactor eta * 2^{p+1}: the extra factor 2 rides on the item weight.
  return assemble(arch, u, graph_items(records, adjacency, 2.0), eta, explicit_terms);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public generator entry points

UpdateGenerators k_supervised_one_hidden(const Architecture& arch, const LayerUnitaries& u,
                                         std::span<const OperatorState> inputs,
                                         std::span<const PureState> targets, double eta) {
  require_hidden(arch, 0, 1, "k_supervised_one_hidden");
  return supervised_explicit(arch, u, inputs, targets, eta);
}

UpdateGenerators k_supervised_two_hidden(const Architecture& arch, const LayerUnitaries& u,
                                         std::span<const OperatorState> inputs,
                                         std::span<const PureState> targets, double eta) {
  require_hidden(arch, 2, 2, "k_supervised_two_hidden");
  return supervised_explicit(arch, u, inputs, targets, eta);
}

UpdateGenerators k_graph_one_hidden(const Architecture& arch, const LayerUnitaries& u,
                                    std::span<const OperatorState> vertex_inputs,
                                    const AdjacencyMatrix& adjacency, double eta) {
  require_hidden(arch, 0, 1, "k_graph_one_hidden");
  return graph_explicit(arch, u, vertex_inputs, adjacency, eta);
}

UpdateGenerators k_graph_two_hidden(const Architecture& arch, const LayerUnitaries& u,
                                    std::span<const OperatorState> vertex_inputs,
                                    const AdjacencyMatrix& adjacency, double eta) {
  require_hidden(arch, 2, 2, "k_graph_two_hidden");
  return graph_explicit(arch, u, vertex_inputs, adjacency, eta);
}

UpdateGenerators k_recursive(const Architecture& arch, const LayerUnitaries& u,
                             const TrainingData& data, double gamma, double eta) {
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  check_inputs(arch, u, data.vertex_inputs);
  const auto records = forward_all(arch, u, data);
  std::vector<ForwardRecord> sup_records;
  for (int x : data.supervised) sup_records.push_back(records[x]);
  std::vector<PathItem> items = supervised_items(arch, sup_records, data.supervised_targets);
  if (gamma != 0.0) {
    // Ordered-pair graph cost: each unordered edge carries 4 A_vw / 2^t.
    const double w = gamma * 4.0 / std::ldexp(1.0, arch.residual_blocks());
    auto g = graph_items(records, data.adjacency, w);
    items.insert(items.end(), std::make_move_iterator(g.begin()), std::make_move_iterator(g.end()));
  }
  return assemble(arch, u, items, eta, recursive_terms);
}

UpdateGenerators k_full(const UpdateGenerators& supervised, const UpdateGenerators& graph,
                        double gamma) {
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  UpdateGenerators out = supervised;
  out.add_scaled(graph, gamma);
  return out;
}

UpdateGenerators k_numeric_oracle(const Architecture& arch, const LayerUnitaries& u,
                                  const TrainingData& data, double gamma, double eta, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw ConfigError("oracle step h must lie in [1e-7, 1e-3]");
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  check_inputs(arch, u, data.vertex_inputs);
  const auto base = forward_all(arch, u, data);
  const int t = arch.residual_blocks();
  const bool use_graph = gamma != 0.0;

  // Only vertices that enter c_sv + gamma * c_g need re-evaluation.
  std::vector<int> needed;
  if (use_graph) {
    for (int v = 0; v < data.num_vertices(); ++v) needed.push_back(v);
  } else {
    needed = data.supervised;
  }

  auto cost_with = [&](const LayerUnitaries& perturbed, int layer) {
    std::vector<OperatorState> outputs(data.vertex_inputs.size());
    for (int v : needed) {
      outputs[v] = forward_from(arch, perturbed, layer, base[v].layer_in[layer - 1]);
    }
    double c = 0.0;
    if (!data.supervised.empty()) {
      std::vector<OperatorState> sup;
      for (int x : data.supervised) sup.push_back(outputs[x]);
      c += cost_supervised(sup, data.supervised_targets, t);
    }
    if (use_graph) c += gamma * cost_graph(outputs, data.adjacency, t);
    return c;
  };

  UpdateGenerators k = UpdateGenerators::zeros(arch);
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const int support = arch.widths[l - 1] + 1;
    const long paulis = 1L << (2 * support);
    for (int j = 0; j < arch.widths[l]; ++j) {
      std::vector<double> slope(paulis);
#pragma omp parallel for schedule(dynamic)
      for (long a = 0; a < paulis; ++a) {
        const ComplexMatrix p = pauli_string(support, static_cast<std::uint64_t>(a));
        const ComplexMatrix id = ComplexMatrix::Identity(p.rows(), p.cols());
        const ComplexMatrix& uj = u.layers[l - 1][j].matrix();
        LayerUnitaries plus = u;
        LayerUnitaries minus = u;
        plus.layers[l - 1][j] =
            UnitaryMatrix((std::cos(h) * id + Complex{0.0, std::sin(h)} * p) * uj);
        minus.layers[l - 1][j] =
            UnitaryMatrix((std::cos(h) * id - Complex{0.0, std::sin(h)} * p) * uj);
        slope[a] = (cost_with(plus, l) - cost_with(minus, l)) / (2.0 * h);
      }
      ComplexMatrix acc = ComplexMatrix::Zero(Eigen::Index{1} << support, Eigen::Index{1} << support);
      for (long a = 0; a < paulis; ++a) {
        if (slope[a] != 0.0) acc += slope[a] * pauli_string(support, static_cast<std::uint64_t>(a));
      }
      // eta * 2^p * G with G = sum_P slope_P P / 2^{p+1}.
      k.k[l - 1][j] = (0.5 * eta) * acc;
    }
  }
  return k;
}

UpdateGenerators compute_generators(const Architecture& arch, const LayerUnitaries& u,
                                    const TrainingData& data, const TrainingConfig& config) {
  const double gamma = config.gamma;
  switch (config.k_mode) {
    case KMode::numeric:
      return k_numeric_oracle(arch, u, data, gamma, config.eta, config.oracle_step);
    case KMode::analytic:
    case KMode::hybrid: {
      if (arch.hidden_layers() > 2) {
        if (config.k_mode == KMode::analytic) {
          throw ConfigError("analytic mode supports at most two hidden layers; use hybrid");
        }
        return k_recursive(arch, u, data, gamma, config.eta);
      }
      check_inputs(arch, u, data.vertex_inputs);
      const auto records = forward_all(arch, u, data);
      std::vector<ForwardRecord> sup_records;
      for (int x : data.supervised) sup_records.push_back(records[x]);
      UpdateGenerators sup = assemble(
          arch, u, supervised_items(arch, sup_records, data.supervised_targets), config.eta,
          explicit_terms);
      if (gamma == 0.0) return sup;
      UpdateGenerators graph =
          assemble(arch, u, graph_items(records, data.adjacency, 2.0), config.eta, explicit_terms);
      return k_full(sup, graph.scaled(graph_calibration(arch)), gamma);
    }
  }
  throw ConfigError("unknown k_mode");
}

LayerUnitaries update_step(const LayerUnitaries& u, const UpdateGenerators& k, double epsilon) {
  if (u.layers.size() != k.k.size()) throw DimensionError("generator layer count mismatch");
  LayerUnitaries out;
  out.layers.resize(u.layers.size());
  for (std::size_t l = 0; l < u.layers.size(); ++l) {
    if (u.layers[l].size() != k.k[l].size()) throw DimensionError("generator width mismatch");
    for (std::size_t j = 0; j < u.layers[l].size(); ++j) {
      if (k.k[l][j].rows() != u.layers[l][j].dim()) {
        throw DimensionError("generator dimension mismatch");
      }
      const UnitaryMatrix step = exp_i_hermitian(k.k[l][j], epsilon);
      out.layers[l].emplace_back(step.matrix() * u.layers[l][j].matrix());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation and the epoch loop

std::vector<ForwardRecord> forward_all(const Architecture& arch, const LayerUnitaries& u,
                                       const TrainingData& data) {
  return forward_many(arch, u, data.vertex_inputs);
}

CostReport evaluate(const Architecture& arch, std::span<const ForwardRecord> records,
                    const TrainingData& data, double gamma) {
  const int t = arch.residual_blocks();
  std::vector<OperatorState> outputs;
  outputs.reserve(records.size());
  for (const auto& r : records) outputs.push_back(r.output());

  CostReport rep;
  if (!data.supervised.empty()) {
    std::vector<OperatorState> sup;
    for (int x : data.supervised) sup.push_back(outputs[x]);
    rep.c_sv = cost_supervised(sup, data.supervised_targets, t);
  }
  rep.c_g = cost_graph(outputs, data.adjacency, t);
  rep.c_full = cost_full(rep.c_sv, rep.c_g, gamma);
  if (!data.test.empty()) {
    std::vector<OperatorState> test;
    for (int x : data.test) test.push_back(outputs[x]);
    rep.c_test = cost_test(test, data.test_targets, t);
  } else {
    rep.c_test = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

CostReport evaluate(const Architecture& arch, const LayerUnitaries& u, const TrainingData& data,
                    double gamma) {
  const auto records = forward_all(arch, u, data);
  return evaluate(arch, records, data, gamma);
}

TrainingTrace train_from(const Architecture& arch, LayerUnitaries start, const TrainingData& data,
                         const TrainingConfig& config) {
  config.validate();
  arch.validate();
  start.check_shape(arch);
  if (config.k_mode == KMode::analytic && arch.hidden_layers() > 2) {
    throw ConfigError("analytic mode supports at most two hidden layers; use hybrid");
  }
  using Clock = std::chrono::steady_clock;

  TrainingTrace trace;
  LayerUnitaries u = std::move(start);
  trace.initial = evaluate(arch, u, data, config.gamma);
  trace.epochs.reserve(config.epochs);

  constexpr double kPlateauDelta = 1e-7;
  constexpr int kPlateauRun = 20;
  int flat_run = 0;
  double prev_full = trace.initial.c_full;

  for (int e = 1; e <= config.epochs; ++e) {
    const auto t0 = Clock::now();
    const UpdateGenerators k = compute_generators(arch, u, data, config);
    u = update_step(u, k, config.epsilon);
    EpochRecord rec;
    rec.epoch = e;
    rec.cost = evaluate(arch, u, data, config.gamma);
    if (config.record_wall_time) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    flat_run = std::abs(rec.cost.c_full - prev_full) < kPlateauDelta ? flat_run + 1 : 0;
    if (flat_run >= kPlateauRun && !trace.plateau_epoch) trace.plateau_epoch = e;
    prev_full = rec.cost.c_full;
    trace.epochs.push_back(rec);
  }
  trace.final_unitaries = std::move(u);
  return trace;
}

TrainingTrace train(const Architecture& arch, const TrainingData& data,
                    const TrainingConfig& config) {
  Rng rng = make_rng(config.seed, kInitStream);
  return train_from(arch, init_unitaries(arch, rng), data, config);
}

TrainingTrace train(const Architecture& arch, const GraphDataset& dataset,
                    const TrainingConfig& config) {
  if (dataset.input_qubits != arch.input_width()) {
    throw DimensionError("dataset has " + std::to_string(dataset.input_qubits) +
                         "-qubit inputs but the network expects " +
                         std::to_string(arch.input_width()));
  }
  return train(arch, TrainingData::from_dataset(dataset), config);
}

}  // namespace reshqcnn
