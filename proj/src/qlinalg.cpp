#include "reshqcnn/qlinalg.hpp"

#include <array>
#include <cmath>
#include <string>

#include "reshqcnn/errors.hpp"
#include "reshqcnn/kernels.hpp"

namespace reshqcnn {

int qubits_for_dimension(Eigen::Index dim) {
  if (dim <= 0 || (dim & (dim - 1)) != 0) {
    throw DimensionError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ContractError(std::string(what) + " has non-finite entries");
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                         std::to_string(b));
  }
}

}  // namespace

OperatorState::OperatorState(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("operator state must be square");
  n_ = qubits_for_dimension(m_.rows());
  require_finite(m_, "operator state");
  if (hermiticity_defect(m_) > kHermitianTolerance) {
    throw ContractError("operator state is not Hermitian");
  }
}

OperatorState OperatorState::trusted(ComplexMatrix m, int num_qubits) {
  OperatorState s;
  s.m_ = std::move(m);
  s.n_ = num_qubits;
  return s;
}

bool OperatorState::is_positive_semidefinite(double tol) const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

PureState::PureState(ComplexVector amplitudes) : v_(std::move(amplitudes)) {
  n_ = qubits_for_dimension(v_.size());
  if (!v_.allFinite()) throw ContractError("pure state has non-finite amplitudes");
  if (std::abs(v_.squaredNorm() - 1.0) > kNormTolerance) {
    throw ContractError("pure state is not normalized");
  }
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DimensionError("unitary must be square");
  n_ = qubits_for_dimension(m_.rows());
  require_finite(m_, "unitary");
  if (unitarity_defect(m_) > kUnitaryTolerance) throw ContractError("matrix is not unitary");
}

UnitaryMatrix UnitaryMatrix::identity(int num_qubits) {
  return UnitaryMatrix(ComplexMatrix::Identity(Eigen::Index{1} << num_qubits,
                                               Eigen::Index{1} << num_qubits));
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index ja = 0; ja < a.cols(); ++ja) {
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
      out.block(ia * b.rows(), ja * b.cols(), b.rows(), b.cols()) = a(ia, ja) * b;
    }
  }
  return out;
}

ComplexMatrix zero_projector(int num_qubits) {
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  p(0, 0) = 1.0;
  return p;
}

OperatorState partial_trace_range(const OperatorState& state,
                                  std::span<const int> subsystem_qubits, int keep_first,
                                  int keep_last) {
  int total = 0;
  for (int q : subsystem_qubits) {
    if (q < 0) throw DimensionError("negative subsystem size");
    total += q;
  }
  if (total != state.num_qubits()) {
    throw DimensionError("subsystem qubit counts sum to " + std::to_string(total) +
                         " but state has " + std::to_string(state.num_qubits()) + " qubits");
  }
  const int parts = static_cast<int>(subsystem_qubits.size());
  if (keep_first < 0 || keep_last >= parts || keep_first > keep_last) {
    throw DimensionError("kept subsystem range out of bounds");
  }
  std::vector<int> keep;
  int offset = 0;
  for (int k = 0; k < parts; ++k) {
    if (k >= keep_first && k <= keep_last) {
      for (int q = 0; q < subsystem_qubits[k]; ++q) keep.push_back(offset + q);
    }
    offset += subsystem_qubits[k];
  }
  return OperatorState::trusted(kernels::partial_trace(state.matrix(), state.num_qubits(), keep),
                                static_cast<int>(keep.size()));
}

OperatorState partial_trace(const OperatorState& state, std::span<const int> subsystem_qubits,
                            int keep_index) {
  return partial_trace_range(state, subsystem_qubits, keep_index, keep_index);
}

namespace {

Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
}

}  // namespace

UnitaryMatrix haar_random_unitary(int num_qubits, Rng& rng) {
  if (num_qubits < 1) throw DimensionError("haar_random_unitary needs at least one qubit");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  ComplexMatrix z(d, d);
  // Row-major fill keeps the draw order independent of Eigen's storage order.
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = complex_gaussian(rng);

  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex{1.0, 0.0};
    q.col(k) *= phase;
  }
  return UnitaryMatrix(std::move(q));
}

PureState random_pure_state(int num_qubits, Rng& rng) {
  if (num_qubits < 1) throw DimensionError("random_pure_state needs at least one qubit");
  const Eigen::Index d = Eigen::Index{1} << num_qubits;
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = complex_gaussian(rng);
  v /= v.norm();
  return PureState(std::move(v));
}

UnitaryMatrix exp_i_hermitian(const ComplexMatrix& k, double scale) {
  if (k.rows() != k.cols()) throw DimensionError("exp_i_hermitian needs a square matrix");
  if (hermiticity_defect(k) > 1e-9) throw ContractError("exp_i_hermitian: input not Hermitian");
  const ComplexMatrix herm = 0.5 * (k + k.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  const ComplexMatrix& vecs = es.eigenvectors();
  ComplexVector phases(vecs.cols());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, scale * es.eigenvalues()(i));
  }
  return UnitaryMatrix(vecs * phases.asDiagonal() * vecs.adjoint());
}

double fidelity_pure(const PureState& target, const OperatorState& state) {
  require_same_dim(target.dim(), state.dim(), "fidelity_pure");
  const ComplexVector& phi = target.amplitudes();
  return phi.dot(state.matrix() * phi).real();
}

double hs_distance(const OperatorState& a, const OperatorState& b) {
  require_same_dim(a.dim(), b.dim(), "hs_distance");
  const ComplexMatrix diff = a.matrix() - b.matrix();
  // tr(D^2) = sum_ij D_ij D_ji = sum_ij |D_ij|^2 for Hermitian D; use the
  // trace form so the result does not silently assume Hermiticity.
  return (diff * diff).trace().real();
}

ComplexMatrix pauli_string(int num_qubits, std::uint64_t index) {
  static const std::array<ComplexMatrix, 4> paulis = [] {
    std::array<ComplexMatrix, 4> p;
    p[0] = ComplexMatrix::Identity(2, 2);
    p[1] = ComplexMatrix::Zero(2, 2);
    p[1](0, 1) = 1.0;
    p[1](1, 0) = 1.0;
    p[2] = ComplexMatrix::Zero(2, 2);
    p[2](0, 1) = Complex{0.0, -1.0};
    p[2](1, 0) = Complex{0.0, 1.0};
    p[3] = ComplexMatrix::Zero(2, 2);
    p[3](0, 0) = 1.0;
    p[3](1, 1) = -1.0;
    return p;
  }();
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    const auto digit = (index >> (2 * (num_qubits - 1 - q))) & 3u;
    out = tensor_product(out, paulis[digit]);
  }
  return out;
}

std::vector<ComplexMatrix> pauli_basis(int num_qubits) {
  if (num_qubits < 1) throw DimensionError("pauli_basis needs at least one qubit");
  const std::uint64_t count = std::uint64_t{1} << (2 * num_qubits);
  std::vector<ComplexMatrix> basis;
  basis.reserve(count);
  for (std::uint64_t a = 0; a < count; ++a) basis.push_back(pauli_string(num_qubits, a));
  return basis;
}

}  // namespace reshqcnn
