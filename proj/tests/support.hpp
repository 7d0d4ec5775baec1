#pragma once

// Shared fixtures for the test binaries: random instances and comparisons.

#include <algorithm>
#include <cmath>
#include <vector>

#include "reshqcnn/graphdata.hpp"
#include "reshqcnn/netcore.hpp"
#include "reshqcnn/trainer.hpp"

namespace testing_support {

using namespace reshqcnn;

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return max_abs(a - b); }

inline ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex{g(rng), g(rng)};
  return m;
}

inline ComplexMatrix random_hermitian(int n, Rng& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix a = random_complex(d, d, rng);
  return (a + a.adjoint()) / 2.0;
}

// Random mixed state: G G^dagger normalized.
inline OperatorState random_density(int n, Rng& rng) {
  const Eigen::Index d = Eigen::Index{1} << n;
  ComplexMatrix g = random_complex(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return OperatorState(rho);
}

// Graph training data with random inputs, a Haar target and the given split.
inline TrainingData random_training_data(int m0, int n, std::vector<int> supervised,
                                         std::vector<std::pair<int, int>> edges, Rng& rng) {
  GraphSpec spec = custom_graph_spec(n, std::move(edges), std::move(supervised));
  GraphDataset ds = generate_dataset(spec, m0, 0.3, rng);
  return TrainingData::from_dataset(ds);
}

inline std::vector<std::pair<int, int>> chain_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

// Largest per-Pauli-coefficient relative mismatch between two generator sets,
// with an absolute floor: |a - b| <= rel * max(|a|, |b|) + abs_floor.
struct CoefficientCheck {
  double worst_ratio = 0.0;  // max |a-b| / (rel*max(|a|,|b|) + floor); pass iff <= 1
  int coefficients = 0;
};

inline CoefficientCheck compare_pauli_coefficients(const UpdateGenerators& a,
                                                   const UpdateGenerators& b, double rel,
                                                   double abs_floor) {
  CoefficientCheck out;
  for (std::size_t l = 0; l < a.k.size(); ++l) {
    for (std::size_t j = 0; j < a.k[l].size(); ++j) {
      const ComplexMatrix& ka = a.k[l][j];
      const ComplexMatrix& kb = b.k[l][j];
      const int q = qubits_for_dimension(ka.rows());
      const double norm = std::ldexp(1.0, q);
      for (std::uint64_t p = 0; p < (std::uint64_t{1} << (2 * q)); ++p) {
        const ComplexMatrix P = pauli_string(q, p);
        const double ca = (P * ka).trace().real() / norm;
        const double cb = (P * kb).trace().real() / norm;
        const double tol = rel * std::max(std::abs(ca), std::abs(cb)) + abs_floor;
        out.worst_ratio = std::max(out.worst_ratio, std::abs(ca - cb) / tol);
        ++out.coefficients;
      }
    }
  }
  return out;
}

}  // namespace testing_support
