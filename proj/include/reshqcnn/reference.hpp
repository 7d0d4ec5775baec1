#pragma once

// Serial, deliberately naive implementations used as test oracles for the
// kernels and as the baseline of the benchmark. Nothing in the library's
// production path calls into this namespace.

#include <span>

#include "reshqcnn/qlinalg.hpp"

namespace reshqcnn::reference {

/// Full 2^n x 2^n matrix of `gate` acting on `qubits`, identity elsewhere.
ComplexMatrix embed_gate(const ComplexMatrix& gate, std::span<const int> qubits,
                         int num_qubits);

/// E m E^dagger with E = embed_gate(...), as a dense product.
ComplexMatrix conjugate(const ComplexMatrix& m, const ComplexMatrix& gate,
                        std::span<const int> qubits, int num_qubits);

/// Partial trace by looping over every (row, col) entry of the input.
ComplexMatrix partial_trace(const ComplexMatrix& m, int num_qubits, std::span<const int> keep);

/// One network layer as a single monolithic matrix: builds
/// U = E_{m_l} ... E_1 on m_prev + m_l qubits, applies it to
/// rho_in (x) |0..0><0..0| and traces out the first m_prev qubits.
ComplexMatrix layer_forward(const ComplexMatrix& rho_in, std::span<const ComplexMatrix> layer,
                            int m_prev, int m_l);

}  // namespace reshqcnn::reference
