#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "reshqcnn/kernels.hpp"
#include "reshqcnn/reference.hpp"
#include "support.hpp"

using namespace reshqcnn;
using namespace testing_support;

TEST(Kernels, ConjugateMatchesDenseEmbedding) {
  Rng rng(21);
  for (int n = 2; n <= 5; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      // Random non-contiguous, unordered support.
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      std::shuffle(all.begin(), all.end(), rng);
      const int k = 1 + trial % std::min(n, 3);
      std::vector<int> qubits(all.begin(), all.begin() + k);
      ComplexMatrix gate = haar_random_unitary(k, rng).matrix();
      ComplexMatrix m = random_complex(Eigen::Index{1} << n, Eigen::Index{1} << n, rng);

      ComplexMatrix fast = m;
      kernels::conjugate(fast, gate, qubits, n);
      EXPECT_LT(max_abs_diff(fast, reference::conjugate(m, gate, qubits, n)), 1e-12);

      ComplexMatrix left = m;
      kernels::apply_left(left, gate, qubits, n);
      EXPECT_LT(max_abs_diff(left, reference::embed_gate(gate, qubits, n) * m), 1e-12);

      ComplexMatrix adj = m;
      kernels::conjugate_adjoint(adj, gate, qubits, n);
      ComplexMatrix e = reference::embed_gate(gate, qubits, n);
      EXPECT_LT(max_abs_diff(adj, e.adjoint() * m * e), 1e-12);
    }
  }
}

TEST(Kernels, EmbedGateBigEndian) {
  // X on qubit 0 of 2 flips the most significant bit: |00> -> |10>.
  ComplexMatrix x = pauli_string(1, 1);
  const std::vector<int> q0{0};
  ComplexMatrix e = reference::embed_gate(x, q0, 2);
  EXPECT_EQ(e(2, 0), Complex(1.0));
  EXPECT_LT(max_abs_diff(e, tensor_product(x, ComplexMatrix::Identity(2, 2))), 1e-15);
}

TEST(Kernels, PartialTraceMatchesReference) {
  Rng rng(22);
  for (int n = 2; n <= 6; ++n) {
    ComplexMatrix m = random_density(n, rng).matrix();
    for (int mask = 1; mask < (1 << n) - 1; mask += 3) {
      std::vector<int> keep;
      for (int q = 0; q < n; ++q)
        if (mask & (1 << q)) keep.push_back(q);
      EXPECT_LT(max_abs_diff(kernels::partial_trace(m, n, keep), reference::partial_trace(m, n, keep)),
                1e-13);
    }
  }
}

TEST(Kernels, PadAndProjectAreAdjoint) {
  Rng rng(23);
  ComplexMatrix a = random_complex(4, 4, rng);
  ComplexMatrix b = random_complex(16, 16, rng);
  // tr(pad(a) b) == tr(a project(b)).
  const Complex lhs = (kernels::pad_zero(a, 2) * b).trace();
  const Complex rhs = (a * kernels::project_zero(b, 2)).trace();
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  EXPECT_LT(max_abs_diff(kernels::pad_zero(a, 2), tensor_product(a, zero_projector(2))), 1e-15);
  EXPECT_EQ(kernels::pad_zero(a, 0), a);
}

TEST(Kernels, IdentityKronAndSupport) {
  Rng rng(24);
  ComplexMatrix a = random_complex(2, 2, rng);
  EXPECT_LT(max_abs_diff(kernels::identity_kron(2, a), tensor_product(ComplexMatrix::Identity(4, 4), a)),
            1e-15);
  EXPECT_EQ(kernels::perceptron_support(2, 0), (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(kernels::perceptron_support(2, 2), (std::vector<int>{0, 1, 4}));
}

TEST(Kernels, LayerForwardMatchesMonolithicOracle) {
  Rng rng(25);
  for (auto [mp, ml] : {std::pair{2, 3}, std::pair{1, 1}, std::pair{3, 2}, std::pair{2, 2}}) {
    OperatorState rho = random_density(mp, rng);
    std::vector<UnitaryMatrix> layer;
    std::vector<ComplexMatrix> raw;
    for (int j = 0; j < ml; ++j) {
      layer.push_back(haar_random_unitary(mp + 1, rng));
      raw.push_back(layer.back().matrix());
    }
    OperatorState out = layer_forward(rho, layer, mp, ml);
    EXPECT_LT(max_abs_diff(out.matrix(), reference::layer_forward(rho.matrix(), raw, mp, ml)), 1e-12);
  }
}
