#include "reshqcnn/netcore.hpp"

#include <charconv>
#include <string>

#include "reshqcnn/errors.hpp"
#include "reshqcnn/kernels.hpp"

namespace reshqcnn {

Architecture Architecture::parse(std::string_view text) {
  Architecture arch;
  std::vector<bool> tilde;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    bool res = false;
    if (!tok.empty() && tok.front() == '~') {
      res = true;
      tok.remove_prefix(1);
    }
    int width = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), width);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ConfigError("bad architecture token '" + std::string(tok) + "' in '" +
                        std::string(text) + "'");
    }
    arch.widths.push_back(width);
    tilde.push_back(res);
    pos = end + 1;
  }
  if (arch.widths.size() < 2) throw ConfigError("architecture needs at least two layers");
  if (tilde.front() || tilde.back()) {
    throw ConfigError("only hidden layers may carry a residual block");
  }
  arch.residual.assign(tilde.begin() + 1, tilde.end() - 1);
  arch.validate();
  return arch;
}

std::string Architecture::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i > 0) out += ',';
    if (i > 0 && i + 1 < widths.size() && residual[i - 1]) out += '~';
    out += std::to_string(widths[i]);
  }
  return out;
}

void Architecture::validate() const {
  if (widths.size() < 2) throw ConfigError("architecture needs at least two layers");
  if (residual.size() + 2 != widths.size()) {
    throw ConfigError("one residual flag per hidden layer is required");
  }
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i] < 1) throw ConfigError("layer widths must be positive");
    // Only a residual layer pads its input up to its own width.
    if (i > 0 && i + 1 < widths.size() && residual[i - 1] && widths[i] < widths[i - 1]) {
      throw ConfigError("a residual layer must be at least as wide as its input");
    }
  }
}

int Architecture::residual_blocks() const {
  int t = 0;
  for (bool r : residual) t += r ? 1 : 0;
  return t;
}

void LayerUnitaries::check_shape(const Architecture& arch) const {
  if (static_cast<int>(layers.size()) != arch.num_layers()) {
    throw DimensionError("unitaries have " + std::to_string(layers.size()) +
                         " layers, architecture has " + std::to_string(arch.num_layers()));
  }
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const auto& layer = layers[l - 1];
    if (static_cast<int>(layer.size()) != arch.widths[l]) {
      throw DimensionError("layer " + std::to_string(l) + " has the wrong perceptron count");
    }
    for (const auto& u : layer) {
      if (u.num_qubits() != arch.widths[l - 1] + 1) {
        throw DimensionError("perceptron in layer " + std::to_string(l) + " has wrong size");
      }
    }
  }
}

LayerUnitaries init_unitaries(const Architecture& arch, Rng& rng) {
  arch.validate();
  LayerUnitaries u;
  u.layers.resize(arch.num_layers());
  for (int l = 1; l <= arch.num_layers(); ++l) {
    for (int j = 0; j < arch.widths[l]; ++j) {
      u.layers[l - 1].push_back(haar_random_unitary(arch.widths[l - 1] + 1, rng));
    }
  }
  return u;
}

namespace {

void check_layer(std::span<const UnitaryMatrix> layer, int m_prev, int m_l) {
  if (static_cast<int>(layer.size()) != m_l) {
    throw DimensionError("layer has " + std::to_string(layer.size()) + " perceptrons, expected " +
                         std::to_string(m_l));
  }
  for (const auto& u : layer) {
    if (u.num_qubits() != m_prev + 1) throw DimensionError("perceptron has the wrong size");
  }
}

}  // namespace

OperatorState layer_forward(const OperatorState& rho_in, std::span<const UnitaryMatrix> layer,
                            int m_prev, int m_l) {
  if (rho_in.num_qubits() != m_prev) {
    throw DimensionError("layer input has " + std::to_string(rho_in.num_qubits()) +
                         " qubits, expected " + std::to_string(m_prev));
  }
  check_layer(layer, m_prev, m_l);
  const int n = m_prev + m_l;
  ComplexMatrix work = kernels::pad_zero(rho_in.matrix(), m_l);
  for (int j = 0; j < m_l; ++j) {
    const auto support = kernels::perceptron_support(m_prev, j);
    kernels::conjugate(work, layer[j].matrix(), support, n);
  }
  std::vector<int> keep(m_l);
  for (int j = 0; j < m_l; ++j) keep[j] = m_prev + j;
  ComplexMatrix out = kernels::partial_trace(work, n, keep);
  // Hermitize away roundoff so downstream invariants see an exact Hermitian.
  out = 0.5 * (out + out.adjoint()).eval();
  return OperatorState::trusted(std::move(out), m_l);
}

ComplexMatrix layer_adjoint(const ComplexMatrix& observable, std::span<const UnitaryMatrix> layer,
                            int m_prev, int m_l) {
  check_layer(layer, m_prev, m_l);
  const Eigen::Index out_dim = Eigen::Index{1} << m_l;
  if (observable.rows() != out_dim || observable.cols() != out_dim) {
    throw DimensionError("observable does not match the layer output");
  }
  const int n = m_prev + m_l;
  ComplexMatrix work = kernels::identity_kron(m_prev, observable);
  for (int j = m_l - 1; j >= 0; --j) {
    const auto support = kernels::perceptron_support(m_prev, j);
    kernels::conjugate_adjoint(work, layer[j].matrix(), support, n);
  }
  return kernels::project_zero(work, m_l);
}

OperatorState residual_add(const OperatorState& rho_out, const OperatorState& rho_in,
                           int delta_m) {
  if (delta_m < 0 || rho_in.num_qubits() + delta_m != rho_out.num_qubits()) {
    throw DimensionError("residual_add: input plus padding does not match output width");
  }
  return OperatorState::trusted(rho_out.matrix() + kernels::pad_zero(rho_in.matrix(), delta_m),
                                rho_out.num_qubits());
}

ForwardRecord forward(const Architecture& arch, const LayerUnitaries& unitaries,
                      const OperatorState& rho_in) {
  unitaries.check_shape(arch);
  if (rho_in.num_qubits() != arch.input_width()) {
    throw DimensionError("input state has " + std::to_string(rho_in.num_qubits()) +
                         " qubits, network expects " + std::to_string(arch.input_width()));
  }
  ForwardRecord rec;
  rec.layer_in.reserve(arch.num_layers());
  rec.layer_out.reserve(arch.num_layers());
  rec.layer_in.push_back(rho_in);
  for (int l = 1; l <= arch.num_layers(); ++l) {
    const OperatorState& in = rec.layer_in.back();
    rec.layer_out.push_back(
        layer_forward(in, unitaries.layers[l - 1], arch.widths[l - 1], arch.widths[l]));
    if (l == arch.num_layers()) break;
    if (arch.has_residual(l)) {
      rec.layer_in.push_back(residual_add(rec.layer_out.back(), in, arch.delta(l)));
    } else {
      rec.layer_in.push_back(rec.layer_out.back());
    }
  }
  return rec;
}

OperatorState forward_from(const Architecture& arch, const LayerUnitaries& unitaries,
                           int first_layer, const OperatorState& rho_layer_in) {
  if (first_layer < 1 || first_layer > arch.num_layers()) {
    throw DimensionError("forward_from: layer index out of range");
  }
  OperatorState in = rho_layer_in;
  for (int l = first_layer;; ++l) {
    OperatorState out =
        layer_forward(in, unitaries.layers[l - 1], arch.widths[l - 1], arch.widths[l]);
    if (l == arch.num_layers()) return out;
    in = arch.has_residual(l) ? residual_add(out, in, arch.delta(l)) : std::move(out);
  }
}

}  // namespace reshqcnn
