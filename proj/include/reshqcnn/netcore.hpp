#pragma once

// Network architecture and the residual hybrid quantum-classical forward pass.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reshqcnn/qlinalg.hpp"

namespace reshqcnn {

/// Layer widths m_0..m_{L+1} plus one residual flag per hidden layer.
/// The string form is the familiar width list with "~" marking a residual
/// hidden layer, e.g. "2,~3,2".
struct Architecture {
  std::vector<int> widths;
  std::vector<bool> residual;

  /// Throws ConfigError on malformed text or an invalid architecture.
  static Architecture parse(std::string_view text);
  std::string to_string() const;

  /// Throws ConfigError unless widths are positive, every residual layer is
  /// at least as wide as its input and there is one flag per hidden layer.
  void validate() const;

  /// Number of unitary layers L+1.
  int num_layers() const { return static_cast<int>(widths.size()) - 1; }
  int hidden_layers() const { return static_cast<int>(widths.size()) - 2; }
  int input_width() const { return widths.front(); }
  int output_width() const { return widths.back(); }
  /// t, the number of residual blocks.
  int residual_blocks() const;
  /// m_l - m_{l-1} for l = 1..L+1.
  int delta(int l) const { return widths[l] - widths[l - 1]; }
  /// Whether a residual block follows layer l (1-based). Never true for the output layer.
  bool has_residual(int l) const { return l <= hidden_layers() && residual[l - 1]; }

  bool operator==(const Architecture&) const = default;
};

/// Perceptron unitaries U_j^l; layers[l-1][j-1] acts on m_{l-1}+1 qubits.
struct LayerUnitaries {
  std::vector<std::vector<UnitaryMatrix>> layers;

  /// Throws DimensionError unless counts and sizes match `arch`.
  void check_shape(const Architecture& arch) const;
};

/// Intermediate states of one forward pass. Index k holds layer k+1:
/// layer_in[k] is rho^{(k+1)_in}, layer_out[k] is rho^{(k+1)_out}.
struct ForwardRecord {
  std::vector<OperatorState> layer_in;
  std::vector<OperatorState> layer_out;

  const OperatorState& output() const { return layer_out.back(); }
};

/// Every perceptron drawn from haar_random_unitary in layer-major order.
LayerUnitaries init_unitaries(const Architecture& arch, Rng& rng);

/// tr_prev( U_{m_l}...U_1 (rho_in (x) |0..0><0..0|) U_1^dagger...U_{m_l}^dagger ).
OperatorState layer_forward(const OperatorState& rho_in, std::span<const UnitaryMatrix> layer,
                            int m_prev, int m_l);

/// Heisenberg-picture adjoint of layer_forward: maps an observable on the
/// m_l output qubits to one on the m_prev input qubits.
ComplexMatrix layer_adjoint(const ComplexMatrix& observable, std::span<const UnitaryMatrix> layer,
                            int m_prev, int m_l);

/// rho_out + rho_in (x) |0..0><0..0|_{delta_m}.
OperatorState residual_add(const OperatorState& rho_out, const OperatorState& rho_in,
                           int delta_m);

/// Full forward pass with all intermediates recorded.
ForwardRecord forward(const Architecture& arch, const LayerUnitaries& unitaries,
                      const OperatorState& rho_in);

/// Runs layers first_layer..L+1 (1-based) starting from rho^{first_layer_in}.
/// Used to re-evaluate a network after perturbing one layer.
OperatorState forward_from(const Architecture& arch, const LayerUnitaries& unitaries,
                           int first_layer, const OperatorState& rho_layer_in);

}  // namespace reshqcnn
