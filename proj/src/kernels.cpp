#include "reshqcnn/kernels.hpp"

#include <string>

#include "reshqcnn/errors.hpp"

namespace reshqcnn::kernels {

namespace {

using Index = Eigen::Index;

// Offsets of the 2^k gate basis states inside the register index, and the
// register indices with all gate bits cleared.
struct GateLayout {
  std::vector<Index> offsets;
  std::vector<Index> bases;
};

GateLayout make_layout(std::span<const int> qubits, int num_qubits) {
  const int k = static_cast<int>(qubits.size());
  Index gate_mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) throw DimensionError("gate qubit out of range");
    const Index bit = Index{1} << (num_qubits - 1 - q);
    if (gate_mask & bit) throw DimensionError("gate qubits must be distinct");
    gate_mask |= bit;
  }
  GateLayout layout;
  layout.offsets.resize(Index{1} << k);
  for (Index a = 0; a < (Index{1} << k); ++a) {
    Index off = 0;
    for (int i = 0; i < k; ++i) {
      if ((a >> (k - 1 - i)) & 1) off |= Index{1} << (num_qubits - 1 - qubits[i]);
    }
    layout.offsets[a] = off;
  }
  const Index dim = Index{1} << num_qubits;
  layout.bases.reserve(dim >> k);
  for (Index r = 0; r < dim; ++r) {
    if ((r & gate_mask) == 0) layout.bases.push_back(r);
  }
  return layout;
}

void check_gate(const ComplexMatrix& m, const ComplexMatrix& gate, std::span<const int> qubits,
                int num_qubits) {
  const Index dim = Index{1} << num_qubits;
  if (m.rows() != dim) {
    throw DimensionError("matrix has " + std::to_string(m.rows()) + " rows, register needs " +
                         std::to_string(dim));
  }
  const Index gdim = Index{1} << qubits.size();
  if (gate.rows() != gdim || gate.cols() != gdim) {
    throw DimensionError("gate dimension does not match its qubit list");
  }
}

}  // namespace

void apply_left(ComplexMatrix& m, const ComplexMatrix& gate, std::span<const int> qubits,
                int num_qubits) {
  check_gate(m, gate, qubits, num_qubits);
  const GateLayout layout = make_layout(qubits, num_qubits);
  const Index gdim = gate.rows();
  const Index cols = m.cols();
  const Index nbases = static_cast<Index>(layout.bases.size());

#pragma omp parallel
  {
    ComplexVector in(gdim);
    ComplexVector out(gdim);
#pragma omp for schedule(static)
    for (Index c = 0; c < cols; ++c) {
      Complex* col = m.col(c).data();
      for (Index b = 0; b < nbases; ++b) {
        const Index base = layout.bases[b];
        for (Index a = 0; a < gdim; ++a) in(a) = col[base + layout.offsets[a]];
        out.noalias() = gate * in;
        for (Index a = 0; a < gdim; ++a) col[base + layout.offsets[a]] = out(a);
      }
    }
  }
}

void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& gate,
                         std::span<const int> qubits, int num_qubits) {
  // m G^dagger = (G m^dagger)^dagger keeps the inner loop on contiguous columns.
  ComplexMatrix t = m.adjoint();
  apply_left(t, gate, qubits, num_qubits);
  m = t.adjoint();
}

void conjugate_adjoint(ComplexMatrix& m, const ComplexMatrix& gate,
                       std::span<const int> qubits, int num_qubits) {
  const ComplexMatrix gd = gate.adjoint();
  apply_left(m, gd, qubits, num_qubits);
  apply_right_adjoint(m, gd, qubits, num_qubits);
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits, std::span<const int> keep) {
  const Index dim = Index{1} << num_qubits;
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError("partial_trace: matrix does not match register size");
  }
  for (std::size_t i = 1; i < keep.size(); ++i) {
    if (keep[i] <= keep[i - 1]) throw DimensionError("partial_trace: keep list must ascend");
  }
  const GateLayout layout = make_layout(keep, num_qubits);
  const Index kdim = static_cast<Index>(layout.offsets.size());
  const Index tcount = static_cast<Index>(layout.bases.size());
  ComplexMatrix out(kdim, kdim);

#pragma omp parallel for schedule(static)
  for (Index j = 0; j < kdim; ++j) {
    for (Index i = 0; i < kdim; ++i) {
      Complex acc{0.0, 0.0};
      for (Index t = 0; t < tcount; ++t) {
        const Index base = layout.bases[t];
        acc += m(base + layout.offsets[i], base + layout.offsets[j]);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix pad_zero(const ComplexMatrix& m, int extra) {
  if (extra == 0) return m;
  const Index s = Index{1} << extra;
  ComplexMatrix out = ComplexMatrix::Zero(m.rows() * s, m.cols() * s);
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out(i * s, j * s) = m(i, j);
  return out;
}

ComplexMatrix project_zero(const ComplexMatrix& m, int extra) {
  if (extra == 0) return m;
  const Index s = Index{1} << extra;
  if (m.rows() % s != 0 || m.cols() % s != 0) {
    throw DimensionError("project_zero: matrix too small for the projected qubits");
  }
  ComplexMatrix out(m.rows() / s, m.cols() / s);
  for (Index j = 0; j < out.cols(); ++j)
    for (Index i = 0; i < out.rows(); ++i) out(i, j) = m(i * s, j * s);
  return out;
}

ComplexMatrix identity_kron(int leading_qubits, const ComplexMatrix& m) {
  const Index reps = Index{1} << leading_qubits;
  ComplexMatrix out = ComplexMatrix::Zero(m.rows() * reps, m.cols() * reps);
  for (Index r = 0; r < reps; ++r) out.block(r * m.rows(), r * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

std::vector<int> perceptron_support(int m_prev, int j) {
  std::vector<int> q(static_cast<std::size_t>(m_prev) + 1);
  for (int i = 0; i < m_prev; ++i) q[i] = i;
  q[m_prev] = m_prev + j;
  return q;
}

}  // namespace reshqcnn::kernels
