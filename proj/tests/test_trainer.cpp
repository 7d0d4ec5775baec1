#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reshqcnn/errors.hpp"
#include "reshqcnn/kernels.hpp"
#include "reshqcnn/trainer.hpp"
#include "support.hpp"

using namespace reshqcnn;
using namespace testing_support;

namespace {

constexpr double kH = 1e-5;

struct Instance {
  Architecture arch;
  LayerUnitaries u;
  TrainingData data;
};

Instance make_instance(const char* spec, int n, std::vector<int> supervised, std::uint64_t seed) {
  Instance in;
  in.arch = Architecture::parse(spec);
  Rng rng(seed);
  in.u = init_unitaries(in.arch, rng);
  in.data = random_training_data(in.arch.input_width(), n, std::move(supervised), chain_edges(n), rng);
  return in;
}

std::vector<OperatorState> supervised_inputs(const TrainingData& d) {
  std::vector<OperatorState> out;
  for (int x : d.supervised) out.push_back(d.vertex_inputs[x]);
  return out;
}

// Frobenius inner product over all perceptrons.
double dot(const UpdateGenerators& a, const UpdateGenerators& b) {
  double s = 0.0;
  for (std::size_t l = 0; l < a.k.size(); ++l)
    for (std::size_t j = 0; j < a.k[l].size(); ++j) s += (a.k[l][j].adjoint() * b.k[l][j]).trace().real();
  return s;
}

double max_diff(const UpdateGenerators& a, const UpdateGenerators& b) {
  double m = 0.0;
  for (std::size_t l = 0; l < a.k.size(); ++l)
    for (std::size_t j = 0; j < a.k[l].size(); ++j) m = std::max(m, max_abs_diff(a.k[l][j], b.k[l][j]));
  return m;
}

ComplexMatrix swap_gate() {
  ComplexMatrix s = ComplexMatrix::Zero(4, 4);
  s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
  return s;
}

}  // namespace

TEST(SupervisedOneHidden, MatchesOracle) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Instance in = make_instance("2,~3,2", 4, {0, 2}, seed);
    auto sin = supervised_inputs(in.data);
    UpdateGenerators k = k_supervised_one_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
    UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, 0.0, 1.0, kH);
    auto check = compare_pauli_coefficients(k, o, 1e-3, 1e-7);
    EXPECT_LE(check.worst_ratio, 1.0) << "seed " << seed;
  }
}

TEST(SupervisedOneHidden, PlainAndZeroHiddenMatchOracle) {
  for (const char* spec : {"2,3,2", "2,2", "1,~2,1"}) {
    Instance in = make_instance(spec, 3, {0, 1}, 7);
    auto sin = supervised_inputs(in.data);
    UpdateGenerators k = k_supervised_one_hidden(in.arch, in.u, sin, in.data.supervised_targets, 0.7);
    UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, 0.0, 0.7, kH);
    EXPECT_LE(compare_pauli_coefficients(k, o, 1e-3, 1e-7).worst_ratio, 1.0) << spec;
  }
}

TEST(SupervisedOneHidden, HermitianAndWrongFamily) {
  Instance in = make_instance("2,~3,2", 2, {1}, 8);
  auto sin = supervised_inputs(in.data);
  UpdateGenerators k = k_supervised_one_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
  EXPECT_LE(k.max_hermiticity_defect(), 1e-10);
  Instance deep = make_instance("2,~3,~3,2", 2, {1}, 8);
  auto dsin = supervised_inputs(deep.data);
  EXPECT_THROW(k_supervised_one_hidden(deep.arch, deep.u, dsin, deep.data.supervised_targets, 1.0),
               ConfigError);
  EXPECT_THROW(k_supervised_two_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0), ConfigError);
}

TEST(SupervisedOneHidden, TinyStepAscends) {
  Rng rng(9);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Instance in = make_instance("2,~3,2", 3, {0, 2}, 100 + trial);
    auto sin = supervised_inputs(in.data);
    UpdateGenerators k = k_supervised_one_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
    const double before = evaluate(in.arch, in.u, in.data, 0.0).c_sv;
    const double after = evaluate(in.arch, update_step(in.u, k, 1e-4), in.data, 0.0).c_sv;
    EXPECT_GE(after, before);
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(SupervisedOneHidden, FixedPointHasZeroGradient) {
  // [1,1] with a SWAP perceptron reproduces its input; targets equal inputs.
  Architecture arch = Architecture::parse("1,1");
  LayerUnitaries u;
  u.layers.push_back({UnitaryMatrix(swap_gate())});
  Rng rng(10);
  PureState phi = random_pure_state(1, rng);
  TrainingData d;
  d.vertex_inputs = {density_of(phi), density_of(phi)};
  d.supervised = {0, 1};
  d.supervised_targets = {phi, phi};
  d.adjacency = adjacency_from_edges(2, {{0, 1}});
  UpdateGenerators o = k_numeric_oracle(arch, u, d, 0.0, 1.0, kH);
  for (std::uint64_t p = 0; p < 16; ++p) {
    const double c = (pauli_string(2, p) * o.k[0][0]).trace().real() / 4.0;
    EXPECT_LE(std::abs(c), 1e-8);
  }
  auto sin = supervised_inputs(d);
  EXPECT_LE(max_abs(k_supervised_one_hidden(arch, u, sin, d.supervised_targets, 1.0).k[0][0]), 1e-12);
}

TEST(NumericOracle, SingleQubitHandDerivative) {
  // C = <phi| tr_in(U (rho (x) |0><0|) U^dagger) |phi>; along U -> e^{i th P} U
  // dC/dth = i tr(P [W, O]) with W = U (rho (x) |0><0|) U^dagger, O = I (x) |phi><phi|.
  Architecture arch = Architecture::parse("1,1");
  Rng rng(11);
  LayerUnitaries u = init_unitaries(arch, rng);
  PureState in = random_pure_state(1, rng), phi = random_pure_state(1, rng);
  TrainingData d;
  d.vertex_inputs = {density_of(in)};
  d.supervised = {0};
  d.supervised_targets = {phi};
  d.adjacency = adjacency_from_edges(1, {});

  const ComplexMatrix& U = u.layers[0][0].matrix();
  ComplexMatrix w = U * tensor_product(density_of(in).matrix(), zero_projector(1)) * U.adjoint();
  ComplexMatrix obs = tensor_product(ComplexMatrix::Identity(2, 2), density_of(phi).matrix());
  const double eta = 0.8;
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  for (std::uint64_t a = 0; a < 16; ++a) {
    ComplexMatrix p = pauli_string(2, a);
    const double g = (Complex{0.0, 1.0} * (p * (w * obs - obs * w)).trace()).real();
    expect += g * p;
  }
  expect *= eta * 2.0 / 4.0;  // eta * 2^p * sum_P g_P P / 2^{p+1}, p = 1
  UpdateGenerators o = k_numeric_oracle(arch, u, d, 0.0, eta, kH);
  EXPECT_LT(max_abs_diff(o.k[0][0], expect), 1e-8);
}

TEST(NumericOracle, RejectsBadStep) {
  Instance in = make_instance("1,1", 2, {0}, 12);
  EXPECT_THROW(k_numeric_oracle(in.arch, in.u, in.data, 0.0, 1.0, 1e-2), ConfigError);
}

TEST(SupervisedTwoHidden, MatchesOracle) {
  Instance in = make_instance("2,~3,~3,2", 4, {0, 1, 3}, 13);
  auto sin = supervised_inputs(in.data);
  UpdateGenerators k = k_supervised_two_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
  EXPECT_LE(k.max_hermiticity_defect(), 1e-10);
  UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, 0.0, 1.0, kH);
  EXPECT_LE(compare_pauli_coefficients(k, o, 1e-3, 1e-7).worst_ratio, 1.0);
}

TEST(SupervisedTwoHidden, MixedAndPlainFlagsMatchOracle) {
  for (const char* spec : {"2,3,3,2", "2,~3,3,2", "1,2,~2,1"}) {
    Instance in = make_instance(spec, 3, {0, 2}, 14);
    auto sin = supervised_inputs(in.data);
    UpdateGenerators k = k_supervised_two_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
    UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, 0.0, 1.0, kH);
    EXPECT_LE(compare_pauli_coefficients(k, o, 1e-3, 1e-7).worst_ratio, 1.0) << spec;
  }
}

TEST(Graph, DegenerateInputsGiveZero) {
  Instance in = make_instance("2,~3,2", 4, {0}, 15);
  std::vector<OperatorState> same(4, in.data.vertex_inputs[0]);
  UpdateGenerators k = k_graph_one_hidden(in.arch, in.u, same, in.data.adjacency, 1.0);
  for (const auto& layer : k.k)
    for (const auto& m : layer) EXPECT_EQ(max_abs(m), 0.0);
  UpdateGenerators e = k_graph_one_hidden(in.arch, in.u, in.data.vertex_inputs, adjacency_from_edges(4, {}), 1.0);
  for (const auto& layer : e.k)
    for (const auto& m : layer) EXPECT_EQ(max_abs(m), 0.0);
}

TEST(Graph, CalibrationScalarIsStable) {
  // Only the graph term: no supervised vertices, gamma = -1. The oracle then
  // returns -(exact graph gradient); measure the scalar relating it to the
  // uncalibrated generators on several two-vertex instances.
  for (const char* spec : {"2,~3,2", "2,3,2"}) {
    Architecture arch = Architecture::parse(spec);
    std::vector<double> scalars;
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
      Instance in = make_instance(spec, 2, {}, seed);
      UpdateGenerators g = k_graph_one_hidden(arch, in.u, in.data.vertex_inputs, in.data.adjacency, 1.0);
      UpdateGenerators o = k_numeric_oracle(arch, in.u, in.data, -1.0, 1.0, kH);
      const double c = -dot(o, g) / dot(g, g);
      scalars.push_back(c);
      // Whole direction agrees, not only its projection.
      EXPECT_LE(compare_pauli_coefficients(g.scaled(-c), o, 1e-3, 1e-7).worst_ratio, 1.0) << spec;
    }
    for (double c : scalars) {
      EXPECT_GT(c, 0.0);
      EXPECT_NEAR(c / scalars.front(), 1.0, 0.01);
    }
    EXPECT_NEAR(scalars.front(), graph_calibration(arch), 1e-3 * graph_calibration(arch)) << spec;
  }
}

TEST(Graph, TwoHiddenMatchesOracleAfterCalibration) {
  Instance in = make_instance("2,~3,~3,2", 3, {}, 25);
  UpdateGenerators g = k_graph_two_hidden(in.arch, in.u, in.data.vertex_inputs, in.data.adjacency, 1.0);
  UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, -1.0, 1.0, kH);
  EXPECT_LE(compare_pauli_coefficients(g.scaled(-graph_calibration(in.arch)), o, 1e-3, 1e-7).worst_ratio, 1.0);
}

TEST(Recursive, EqualsExplicitFormulas) {
  for (const char* spec : {"2,~3,2", "2,3,2", "2,~3,~3,2", "2,3,~3,2", "1,1"}) {
    Instance in = make_instance(spec, 4, {0, 2}, 26);
    TrainingConfig cfg;
    cfg.gamma = -0.5;
    cfg.k_mode = KMode::analytic;
    UpdateGenerators explicit_k = compute_generators(in.arch, in.u, in.data, cfg);
    UpdateGenerators rec = k_recursive(in.arch, in.u, in.data, cfg.gamma, cfg.eta);
    EXPECT_LT(max_diff(explicit_k, rec), 1e-10) << spec;
  }
}

TEST(Recursive, ThreeHiddenMatchesOracle) {
  Instance in = make_instance("1,~2,~2,~2,1", 3, {0, 2}, 27);
  UpdateGenerators rec = k_recursive(in.arch, in.u, in.data, -0.5, 1.0);
  UpdateGenerators o = k_numeric_oracle(in.arch, in.u, in.data, -0.5, 1.0, kH);
  EXPECT_LE(compare_pauli_coefficients(rec, o, 1e-3, 1e-7).worst_ratio, 1.0);
}

TEST(KFull, Arithmetic) {
  Instance in = make_instance("2,~3,2", 3, {0}, 28);
  auto sin = supervised_inputs(in.data);
  UpdateGenerators s = k_supervised_one_hidden(in.arch, in.u, sin, in.data.supervised_targets, 1.0);
  UpdateGenerators g = k_graph_one_hidden(in.arch, in.u, in.data.vertex_inputs, in.data.adjacency, 1.0);
  EXPECT_EQ(max_diff(k_full(s, g, 0.0), s), 0.0);
  EXPECT_EQ(max_diff(k_full(s, UpdateGenerators::zeros(in.arch), -0.5), s), 0.0);
  UpdateGenerators f = k_full(s, g, -0.5);
  for (std::size_t l = 0; l < s.k.size(); ++l)
    for (std::size_t j = 0; j < s.k[l].size(); ++j)
      EXPECT_LT(max_abs_diff(f.k[l][j], s.k[l][j] - 0.5 * g.k[l][j]), 1e-15);
  UpdateGenerators wrong = UpdateGenerators::zeros(Architecture::parse("2,2"));
  EXPECT_THROW(k_full(s, wrong, -0.5), DimensionError);
  EXPECT_THROW(k_full(s, g, 0.5), ConfigError);
}

TEST(UpdateStep, TrivialCasesAndUnitarity) {
  Instance in = make_instance("2,~3,2", 3, {0}, 29);
  LayerUnitaries same = update_step(in.u, UpdateGenerators::zeros(in.arch), 0.01);
  TrainingConfig cfg;
  cfg.gamma = -0.5;
  UpdateGenerators k = compute_generators(in.arch, in.u, in.data, cfg);
  LayerUnitaries zero_eps = update_step(in.u, k, 0.0);
  LayerUnitaries moved = update_step(in.u, k, 0.01);
  for (std::size_t l = 0; l < in.u.layers.size(); ++l)
    for (std::size_t j = 0; j < in.u.layers[l].size(); ++j) {
      EXPECT_LT(max_abs_diff(same.layers[l][j].matrix(), in.u.layers[l][j].matrix()), 1e-15);
      EXPECT_LT(max_abs_diff(zero_eps.layers[l][j].matrix(), in.u.layers[l][j].matrix()), 1e-15);
      EXPECT_LE(unitarity_defect(moved.layers[l][j].matrix()), 1e-9);
    }
  const double before = evaluate(in.arch, in.u, in.data, -0.5).c_full;
  EXPECT_GE(evaluate(in.arch, moved, in.data, -0.5).c_full, before - 1e-3);
  UpdateGenerators bad = UpdateGenerators::zeros(in.arch);
  bad.k[0][0](0, 1) = 1.0;
  EXPECT_THROW(update_step(in.u, bad, 0.01), ContractError);
}

TEST(UpdateStep, FirstOrderAscentWithGraph) {
  for (std::uint64_t seed = 30; seed < 40; ++seed) {
    Instance in = make_instance(seed % 2 ? "2,~3,2" : "2,~3,~3,2", 5, {0, 3}, seed);
    TrainingConfig cfg;
    cfg.gamma = -0.5;
    UpdateGenerators k = compute_generators(in.arch, in.u, in.data, cfg);
    EXPECT_LE(k.max_hermiticity_defect(), 1e-9);
    const double before = evaluate(in.arch, in.u, in.data, cfg.gamma).c_full;
    for (double eps : {1e-3, 1e-4}) {
      const double after = evaluate(in.arch, update_step(in.u, k, eps), in.data, cfg.gamma).c_full;
      EXPECT_GE(after, before - 1e-6);
    }
  }
}

TEST(Train, SmallestNetworkConverges) {
  // [1,1], S = N = 2, V = identity, 200 epochs. Whether one instance clears
  // 0.95 depends on its draw (roughly 6 in 10 do), so the check is on the
  // median over the first 20 seeds.
  Architecture arch = Architecture::parse("1,1");
  std::vector<double> finals;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    TrainingData d;
    std::vector<PureState> in{random_pure_state(1, rng), random_pure_state(1, rng)};
    d.vertex_inputs = {density_of(in[0]), density_of(in[1])};
    d.supervised = {0, 1};
    d.supervised_targets = in;
    d.adjacency = adjacency_from_edges(2, {{0, 1}});
    TrainingConfig cfg;
    cfg.epochs = 200;
    cfg.seed = seed;
    TrainingTrace tr = train(arch, d, cfg);
    ASSERT_EQ(tr.epochs.size(), 200u);
    EXPECT_GT(tr.epochs.back().cost.c_sv, tr.initial.c_sv);
    EXPECT_TRUE(std::isnan(tr.epochs.back().cost.c_test));
    finals.push_back(tr.epochs.back().cost.c_sv);
  }
  std::sort(finals.begin(), finals.end());
  EXPECT_GE((finals[9] + finals[10]) / 2.0, 0.95);
}

TEST(Train, DeterministicAndEpochCount) {
  GraphSpec spec = build_graph_spec(Topology::line, 6, 2);
  Rng rng = make_rng(5, kDataStream);
  GraphDataset ds = generate_dataset(spec, 2, 0.3, rng);
  TrainingConfig cfg;
  cfg.epochs = 8;
  cfg.gamma = -0.5;
  cfg.seed = 9;
  cfg.record_wall_time = false;
  Architecture arch = Architecture::parse("2,~3,2");
  TrainingTrace a = train(arch, ds, cfg), b = train(arch, ds, cfg);
  ASSERT_EQ(a.epochs.size(), 8u);
  for (std::size_t e = 0; e < 8; ++e) {
    EXPECT_EQ(a.epochs[e].epoch, static_cast<int>(e) + 1);
    EXPECT_EQ(a.epochs[e].cost.c_full, b.epochs[e].cost.c_full);
    EXPECT_EQ(a.epochs[e].cost.c_test, b.epochs[e].cost.c_test);
    EXPECT_EQ(a.epochs[e].wall_ms, 0.0);
  }
  cfg.epochs = 0;
  TrainingTrace none = train(arch, ds, cfg);
  EXPECT_TRUE(none.epochs.empty());
  EXPECT_EQ(none.initial.c_full, a.initial.c_full);
}

TEST(Train, GammaZeroIgnoresGraph) {
  GraphSpec spec = build_graph_spec(Topology::line, 6, 2);
  Rng rng = make_rng(6, kDataStream);
  GraphDataset ds = generate_dataset(spec, 2, 0.3, rng);
  TrainingData with = TrainingData::from_dataset(ds);
  TrainingData without = with;
  without.adjacency = adjacency_from_edges(6, {});
  TrainingConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 2;
  Architecture arch = Architecture::parse("2,~3,2");
  TrainingTrace a = train(arch, with, cfg);
  cfg.k_mode = KMode::analytic;
  TrainingTrace b = train(arch, without, cfg);
  for (std::size_t e = 0; e < a.epochs.size(); ++e) {
    EXPECT_EQ(a.epochs[e].cost.c_sv, b.epochs[e].cost.c_sv);
    EXPECT_EQ(a.epochs[e].cost.c_test, b.epochs[e].cost.c_test);
  }
  for (std::size_t l = 0; l < a.final_unitaries.layers.size(); ++l)
    for (std::size_t j = 0; j < a.final_unitaries.layers[l].size(); ++j)
      EXPECT_EQ(a.final_unitaries.layers[l][j].matrix(), b.final_unitaries.layers[l][j].matrix());
}

TEST(Train, HybridTracksNumericOnTwoHidden) {
  Instance in = make_instance("2,~3,~3,2", 3, {0, 2}, 42);
  TrainingConfig cfg;
  cfg.epochs = 10;
  cfg.gamma = -0.5;
  TrainingTrace h = train_from(in.arch, in.u, in.data, cfg);
  cfg.k_mode = KMode::numeric;
  TrainingTrace n = train_from(in.arch, in.u, in.data, cfg);
  for (std::size_t e = 0; e < 10; ++e) {
    EXPECT_NEAR(h.epochs[e].cost.c_full, n.epochs[e].cost.c_full, 1e-6);
    EXPECT_NEAR(h.epochs[e].cost.c_test, n.epochs[e].cost.c_test, 1e-6);
  }
}

TEST(Train, AnalyticRejectsDeepNetworks) {
  Instance in = make_instance("1,~1,~1,~1,1", 3, {0}, 43);
  TrainingConfig cfg;
  cfg.epochs = 1;
  cfg.k_mode = KMode::analytic;
  EXPECT_THROW(train_from(in.arch, in.u, in.data, cfg), ConfigError);
  cfg.k_mode = KMode::hybrid;
  EXPECT_NO_THROW(train_from(in.arch, in.u, in.data, cfg));
}

TEST(Train, PlateauIsAnnotated) {
  // The fixed point of FixedPointHasZeroGradient never moves.
  Architecture arch = Architecture::parse("1,1");
  LayerUnitaries u;
  u.layers.push_back({UnitaryMatrix(swap_gate())});
  Rng rng(44);
  PureState phi = random_pure_state(1, rng);
  TrainingData d;
  d.vertex_inputs = {density_of(phi)};
  d.supervised = {0};
  d.supervised_targets = {phi};
  d.adjacency = adjacency_from_edges(1, {});
  TrainingConfig cfg;
  cfg.epochs = 30;
  TrainingTrace tr = train_from(arch, u, d, cfg);
  ASSERT_TRUE(tr.plateau_epoch.has_value());
  EXPECT_EQ(*tr.plateau_epoch, 20);
  EXPECT_EQ(tr.epochs.size(), 30u);
}

TEST(TrainingConfig, Validation) {
  TrainingConfig c;
  EXPECT_NO_THROW(c.validate());
  c.gamma = 0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.eta = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.epsilon = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(parse_k_mode("hybrid"), KMode::hybrid);
  EXPECT_THROW(parse_k_mode("magic"), ConfigError);
}

TEST(Rng, StreamsAreIndependentAndStable) {
  Rng a = make_rng(1, kDataStream), b = make_rng(1, kInitStream), c = make_rng(1, kDataStream);
  const auto x = a(), y = b(), z = c();
  EXPECT_NE(x, y);
  EXPECT_EQ(x, z);
}
