#pragma once

// Dense complex linear algebra for small multi-qubit registers.
//
// Qubit ordering is big-endian throughout the library: qubit 0 is the
// leftmost tensor factor and owns the most significant bit of a basis index.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace reshqcnn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// log2 of a dimension; throws DimensionError unless `dim` is a power of two.
int qubits_for_dimension(Eigen::Index dim);

/// Largest entry-wise modulus of `m - m^dagger`.
double hermiticity_defect(const ComplexMatrix& m);
/// Largest entry-wise modulus of `u u^dagger - I`.
double unitarity_defect(const ComplexMatrix& u);

/// Hermitian operator on 2^n dimensions. Usually a density matrix, but the
/// residual network inflates traces to 2^t and the graph terms form
/// differences of states, so positivity is not enforced on construction;
/// see is_positive_semidefinite().
class OperatorState {
 public:
  static constexpr double kHermitianTolerance = 1e-10;

  OperatorState() = default;
  /// Validates shape and Hermiticity.
  explicit OperatorState(ComplexMatrix m);

  /// Skips validation. For kernels whose outputs are Hermitian by construction.
  static OperatorState trusted(ComplexMatrix m, int num_qubits);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int num_qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

  bool is_positive_semidefinite(double tol = 1e-9) const;

 private:
  ComplexMatrix m_;
  int n_ = 0;
};

/// Normalized state vector on 2^n dimensions.
class PureState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  PureState() = default;
  explicit PureState(ComplexVector amplitudes);

  const ComplexVector& amplitudes() const noexcept { return v_; }
  int num_qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return v_.size(); }

 private:
  ComplexVector v_;
  int n_ = 0;
};

class UnitaryMatrix {
 public:
  static constexpr double kUnitaryTolerance = 1e-9;

  UnitaryMatrix() = default;
  explicit UnitaryMatrix(ComplexMatrix m);

  static UnitaryMatrix identity(int num_qubits);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  int num_qubits() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
  int n_ = 0;
};

/// Kronecker product; entry (ia*b.rows+ib, ja*b.cols+jb) = a(ia,ja) * b(ib,jb).
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// |0...0><0...0| on n qubits.
ComplexMatrix zero_projector(int num_qubits);

/// Reduces `state` onto subsystem `keep_index`, where the register is split
/// into consecutive subsystems of `subsystem_qubits[k]` qubits each.
OperatorState partial_trace(const OperatorState& state, std::span<const int> subsystem_qubits,
                            int keep_index);

/// Same as partial_trace() but keeps the contiguous subsystems
/// [keep_first, keep_last] and traces out everything else.
OperatorState partial_trace_range(const OperatorState& state,
                                  std::span<const int> subsystem_qubits, int keep_first,
                                  int keep_last);

/// Haar-distributed unitary: complex Ginibre matrix, Householder QR, then
/// the phases of diag(R) are folded into Q so the result is measure-correct.
UnitaryMatrix haar_random_unitary(int num_qubits, Rng& rng);

/// Complex Gaussian amplitudes, normalized.
PureState random_pure_state(int num_qubits, Rng& rng);

/// e^{i * scale * k} for Hermitian k via the Hermitian eigendecomposition.
/// Throws ContractError when k is not Hermitian within 1e-9.
UnitaryMatrix exp_i_hermitian(const ComplexMatrix& k, double scale);

/// <phi| rho |phi>.
double fidelity_pure(const PureState& target, const OperatorState& state);

/// tr[(a - b)^2].
double hs_distance(const OperatorState& a, const OperatorState& b);

/// All 4^n Pauli strings in lexicographic order over {I, X, Y, Z}, qubit 0
/// being the most significant digit.
std::vector<ComplexMatrix> pauli_basis(int num_qubits);

/// Single Pauli string; `index` digits in base 4 select I/X/Y/Z per qubit.
ComplexMatrix pauli_string(int num_qubits, std::uint64_t index);

}  // namespace reshqcnn
