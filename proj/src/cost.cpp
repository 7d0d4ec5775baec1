#include "reshqcnn/cost.hpp"

#include <cmath>
#include <string>

#include "reshqcnn/errors.hpp"

namespace reshqcnn {

AdjacencyMatrix::AdjacencyMatrix(Eigen::MatrixXd weights) : a_(std::move(weights)) {
  if (a_.rows() != a_.cols()) throw DimensionError("adjacency matrix must be square");
  for (Eigen::Index v = 0; v < a_.rows(); ++v) {
    if (a_(v, v) != 0.0) throw ContractError("adjacency matrix must have a zero diagonal");
    for (Eigen::Index w = 0; w < a_.cols(); ++w) {
      if (!(a_(v, w) >= 0.0) || !std::isfinite(a_(v, w))) {
        throw ContractError("adjacency weights must be finite and non-negative");
      }
      if (a_(v, w) != a_(w, v)) throw ContractError("adjacency matrix must be symmetric");
    }
  }
}

namespace {

double mean_fidelity(std::span<const OperatorState> outputs, std::span<const PureState> targets,
                     int t, const char* what) {
  if (outputs.size() != targets.size()) {
    throw DimensionError(std::string(what) + ": outputs and targets differ in length");
  }
  if (outputs.empty()) throw ContractError(std::string(what) + ": empty state list");
  double sum = 0.0;
  for (std::size_t x = 0; x < outputs.size(); ++x) sum += fidelity_pure(targets[x], outputs[x]);
  return sum / (std::ldexp(1.0, t) * static_cast<double>(outputs.size()));
}

}  // namespace

double cost_supervised(std::span<const OperatorState> outputs, std::span<const PureState> targets,
                       int t) {
  return mean_fidelity(outputs, targets, t, "cost_supervised");
}

double cost_test(std::span<const OperatorState> outputs, std::span<const PureState> test_targets,
                 int t) {
  return mean_fidelity(outputs, test_targets, t, "cost_test");
}

double cost_graph(std::span<const OperatorState> outputs, const AdjacencyMatrix& adjacency,
                  int t) {
  if (static_cast<int>(outputs.size()) != adjacency.size()) {
    throw DimensionError("cost_graph: adjacency size does not match the vertex count");
  }
  double sum = 0.0;
  for (int v = 0; v < adjacency.size(); ++v) {
    for (int w = 0; w < adjacency.size(); ++w) {
      const double a = adjacency(v, w);
      if (a != 0.0) sum += a * hs_distance(outputs[v], outputs[w]);
    }
  }
  return sum / std::ldexp(1.0, t);
}

double cost_full(double c_sv, double c_g, double gamma) {
  if (gamma > 0.0) throw ConfigError("graph control factor gamma must be <= 0");
  return c_sv + gamma * c_g;
}

}  // namespace reshqcnn
