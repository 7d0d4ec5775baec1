#pragma once

#include <span>

#include "reshqcnn/qlinalg.hpp"

namespace reshqcnn {

/// Symmetric, non-negative vertex adjacency with a zero diagonal.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;
  explicit AdjacencyMatrix(Eigen::MatrixXd weights);

  const Eigen::MatrixXd& weights() const noexcept { return a_; }
  int size() const noexcept { return static_cast<int>(a_.rows()); }
  double operator()(int v, int w) const { return a_(v, w); }

 private:
  Eigen::MatrixXd a_;
};

struct CostReport {
  double c_sv = 0.0;
  double c_g = 0.0;
  double c_full = 0.0;
  double c_test = 0.0;
};

/// (1 / (2^t S)) * sum_x <phi_x| out_x |phi_x>.
double cost_supervised(std::span<const OperatorState> outputs, std::span<const PureState> targets,
                       int t);

/// (1 / 2^t) * sum over ordered pairs (v, w) of A_vw * D_HS(out_v, out_w).
/// Each undirected edge therefore contributes twice.
double cost_graph(std::span<const OperatorState> outputs, const AdjacencyMatrix& adjacency, int t);

/// c_sv + gamma * c_g; the quantity training maximizes. Requires gamma <= 0.
double cost_full(double c_sv, double c_g, double gamma);

/// Same normalization as cost_supervised over the held-out vertices.
double cost_test(std::span<const OperatorState> outputs, std::span<const PureState> test_targets,
                 int t);

}  // namespace reshqcnn
