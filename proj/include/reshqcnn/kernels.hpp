#pragma once

// OpenMP kernels on raw matrices. These are the hot paths of the forward
// pass and the update-generator assembly; serial reference versions live in
// reference.hpp and are only used by tests and the benchmark.

#include <span>
#include <vector>

#include "reshqcnn/qlinalg.hpp"

namespace reshqcnn::kernels {

/// m <- G m, with `gate` acting on `qubits` (in the listed order, first qubit
/// most significant inside the gate) of an n-qubit register.
void apply_left(ComplexMatrix& m, const ComplexMatrix& gate, std::span<const int> qubits,
                int num_qubits);

/// m <- m G^dagger, same embedding as apply_left.
void apply_right_adjoint(ComplexMatrix& m, const ComplexMatrix& gate,
                         std::span<const int> qubits, int num_qubits);

/// m <- G m G^dagger.
inline void conjugate(ComplexMatrix& m, const ComplexMatrix& gate, std::span<const int> qubits,
                      int num_qubits) {
  apply_left(m, gate, qubits, num_qubits);
  apply_right_adjoint(m, gate, qubits, num_qubits);
}

/// m <- G^dagger m G.
void conjugate_adjoint(ComplexMatrix& m, const ComplexMatrix& gate,
                       std::span<const int> qubits, int num_qubits);

/// Traces out every qubit not listed in `keep` (ascending). The result keeps
/// the relative order of the kept qubits.
ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits, std::span<const int> keep);

/// m (x) |0...0><0...0| with `extra` fresh qubits appended at the bottom.
ComplexMatrix pad_zero(const ComplexMatrix& m, int extra);

/// <0...0| m |0...0> over the last `extra` qubits; adjoint of pad_zero.
ComplexMatrix project_zero(const ComplexMatrix& m, int extra);

/// I_{2^leading} (x) m.
ComplexMatrix identity_kron(int leading_qubits, const ComplexMatrix& m);

/// Qubit indices a perceptron touches: all `m_prev` previous-layer qubits
/// followed by hidden qubit m_prev + j, with j counted from 0.
std::vector<int> perceptron_support(int m_prev, int j);

}  // namespace reshqcnn::kernels
