#include "reshqcnn/reference.hpp"

#include <vector>

#include "reshqcnn/errors.hpp"

namespace reshqcnn::reference {

namespace {

int bit_of(Eigen::Index index, int qubit, int num_qubits) {
  return static_cast<int>((index >> (num_qubits - 1 - qubit)) & 1);
}

}  // namespace

ComplexMatrix embed_gate(const ComplexMatrix& gate, std::span<const int> qubits,
                         int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const int k = static_cast<int>(qubits.size());
  std::vector<bool> in_gate(num_qubits, false);
  for (int q : qubits) in_gate[q] = true;

  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      bool rest_equal = true;
      for (int q = 0; q < num_qubits; ++q) {
        if (!in_gate[q] && bit_of(r, q, num_qubits) != bit_of(c, q, num_qubits)) {
          rest_equal = false;
          break;
        }
      }
      if (!rest_equal) continue;
      Eigen::Index gr = 0;
      Eigen::Index gc = 0;
      for (int i = 0; i < k; ++i) {
        gr = (gr << 1) | bit_of(r, qubits[i], num_qubits);
        gc = (gc << 1) | bit_of(c, qubits[i], num_qubits);
      }
      out(r, c) = gate(gr, gc);
    }
  }
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m, const ComplexMatrix& gate,
                        std::span<const int> qubits, int num_qubits) {
  const ComplexMatrix e = embed_gate(gate, qubits, num_qubits);
  return e * m * e.adjoint();
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits, std::span<const int> keep) {
  std::vector<bool> kept(num_qubits, false);
  for (int q : keep) kept[q] = true;
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const Eigen::Index kdim = Eigen::Index{1} << keep.size();
  ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      bool traced_equal = true;
      for (int q = 0; q < num_qubits; ++q) {
        if (!kept[q] && bit_of(r, q, num_qubits) != bit_of(c, q, num_qubits)) {
          traced_equal = false;
          break;
        }
      }
      if (!traced_equal) continue;
      Eigen::Index kr = 0;
      Eigen::Index kc = 0;
      for (int q : keep) {
        kr = (kr << 1) | bit_of(r, q, num_qubits);
        kc = (kc << 1) | bit_of(c, q, num_qubits);
      }
      out(kr, kc) += m(r, c);
    }
  }
  return out;
}

ComplexMatrix layer_forward(const ComplexMatrix& rho_in, std::span<const ComplexMatrix> layer,
                            int m_prev, int m_l) {
  if (static_cast<int>(layer.size()) != m_l) throw DimensionError("layer size mismatch");
  const int n = m_prev + m_l;
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix total = ComplexMatrix::Identity(dim, dim);
  for (int j = 0; j < m_l; ++j) {
    std::vector<int> support;
    for (int i = 0; i < m_prev; ++i) support.push_back(i);
    support.push_back(m_prev + j);
    total = embed_gate(layer[j], support, n) * total;
  }
  ComplexMatrix hidden = ComplexMatrix::Zero(Eigen::Index{1} << m_l, Eigen::Index{1} << m_l);
  hidden(0, 0) = 1.0;
  const ComplexMatrix full = tensor_product(rho_in, hidden);
  const ComplexMatrix evolved = total * full * total.adjoint();
  std::vector<int> keep;
  for (int j = 0; j < m_l; ++j) keep.push_back(m_prev + j);
  return partial_trace(evolved, n, keep);
}

}  // namespace reshqcnn::reference
