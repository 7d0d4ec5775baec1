#include "reshqcnn/graphdata.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "reshqcnn/errors.hpp"

namespace reshqcnn {

std::string to_string(Topology t) {
  switch (t) {
    case Topology::line:
      return "line";
    case Topology::connected_clusters:
      return "connected_clusters";
    case Topology::custom:
      return "custom";
  }
  return "custom";
}

Topology parse_topology(std::string_view text) {
  if (text == "line") return Topology::line;
  if (text == "connected_clusters" || text == "clusters") return Topology::connected_clusters;
  if (text == "custom") return Topology::custom;
  throw ConfigError("unknown topology '" + std::string(text) + "'");
}

void GraphSpec::validate() const {
  if (num_vertices < 1) throw ConfigError("graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [v, w] : edges) {
    if (v < 0 || w < 0 || v >= num_vertices || w >= num_vertices) {
      throw ConfigError("edge references a vertex out of range");
    }
    if (v == w) throw ConfigError("self loops are not allowed");
    if (!seen.insert({std::min(v, w), std::max(v, w)}).second) {
      throw ConfigError("duplicate edge");
    }
  }
  if (static_cast<int>(supervised.size()) > num_vertices) {
    throw ConfigError("more supervised vertices than vertices");
  }
  for (std::size_t i = 0; i < supervised.size(); ++i) {
    if (supervised[i] < 0 || supervised[i] >= num_vertices) {
      throw ConfigError("supervised index out of range");
    }
    if (i > 0 && supervised[i] <= supervised[i - 1]) {
      throw ConfigError("supervised indices must be strictly ascending");
    }
  }
  if (topology == Topology::line && static_cast<int>(edges.size()) != num_vertices - 1) {
    throw ConfigError("line topology must have N-1 chain edges");
  }
}

std::vector<int> GraphSpec::test_indices() const {
  std::vector<int> out;
  std::size_t k = 0;
  for (int v = 0; v < num_vertices; ++v) {
    if (k < supervised.size() && supervised[k] == v) {
      ++k;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<int> default_supervised(int n, int s) {
  if (n < 1 || s < 0 || s > n) throw ConfigError("need 0 <= s <= n and n >= 1");
  std::vector<int> idx;
  if (s == 0) return idx;
  const int step = (n + s - 1) / s;
  if ((s - 1) * step < n) {
    for (int i = 0; i < s; ++i) idx.push_back(i * step);
  } else {
    for (int i = 0; i < s; ++i) idx.push_back(static_cast<int>((static_cast<long>(i) * n) / s));
  }
  return idx;
}

GraphSpec build_graph_spec(Topology topology, int n, int s,
                           std::optional<std::vector<int>> supervised) {
  if (n < 1 || s < 0 || s > n) throw ConfigError("need 0 <= s <= n and n >= 1");
  GraphSpec spec;
  spec.topology = topology;
  spec.num_vertices = n;
  switch (topology) {
    case Topology::line:
      for (int i = 0; i + 1 < n; ++i) spec.edges.emplace_back(i, i + 1);
      break;
    case Topology::connected_clusters: {
      const int first = (n + 1) / 2;
      for (int v = 0; v < first; ++v)
        for (int w = v + 1; w < first; ++w) spec.edges.emplace_back(v, w);
      for (int v = first; v < n; ++v)
        for (int w = v + 1; w < n; ++w) spec.edges.emplace_back(v, w);
      if (first < n) spec.edges.emplace_back(first - 1, first);
      break;
    }
    case Topology::custom:
      throw ConfigError("custom topology needs an explicit edge list");
  }
  if (supervised) {
    if (static_cast<int>(supervised->size()) != s) {
      throw ConfigError("explicit supervised list does not have s entries");
    }
    spec.supervised = std::move(*supervised);
    std::sort(spec.supervised.begin(), spec.supervised.end());
  } else {
    spec.supervised = default_supervised(n, s);
  }
  spec.validate();
  return spec;
}

GraphSpec custom_graph_spec(int n, std::vector<std::pair<int, int>> edges,
                            std::vector<int> supervised) {
  GraphSpec spec;
  spec.topology = Topology::custom;
  spec.num_vertices = n;
  spec.edges = std::move(edges);
  spec.supervised = std::move(supervised);
  std::sort(spec.supervised.begin(), spec.supervised.end());
  spec.validate();
  return spec;
}

AdjacencyMatrix adjacency_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (auto [v, w] : edges) {
    a(v, w) = 1.0;
    a(w, v) = 1.0;
  }
  return AdjacencyMatrix(std::move(a));
}

namespace {

// Point at fraction s along the shortest Fubini-Study geodesic from a to b.
ComplexVector geodesic_point(const ComplexVector& a, const ComplexVector& b, double s) {
  const Complex overlap = a.dot(b);
  const double mag = std::abs(overlap);
  // Rotate b's global phase so <a|b> is real and non-negative.
  const ComplexVector b_aligned = mag > 0.0 ? ComplexVector(b * (std::conj(overlap) / mag)) : b;
  const double theta = std::acos(std::clamp(mag, 0.0, 1.0));
  ComplexVector p;
  if (theta < 1e-12) {
    p = a;
  } else {
    p = (std::sin((1.0 - s) * theta) * a + std::sin(s * theta) * b_aligned) / std::sin(theta);
  }
  return p / p.norm();
}

}  // namespace

std::vector<PureState> line_states(const PureState& a, const PureState& b, int n) {
  if (a.dim() != b.dim()) throw DimensionError("line endpoints differ in dimension");
  std::vector<PureState> out;
  for (int x = 0; x < n; ++x) {
    const double s = n > 1 ? static_cast<double>(x) / (n - 1) : 0.0;
    out.emplace_back(geodesic_point(a.amplitudes(), b.amplitudes(), s));
  }
  return out;
}

GraphDataset generate_dataset(const GraphSpec& spec, int m0, double delta, Rng& rng) {
  spec.validate();
  if (!(delta > 0.0)) throw ConfigError("closeness scale delta must be positive");
  if (m0 < 1) throw ConfigError("input width must be at least one qubit");
  const int n = spec.num_vertices;

  GraphDataset ds;
  ds.spec = spec;
  ds.input_qubits = m0;
  ds.delta = delta;
  ds.inputs.reserve(n);

  switch (spec.topology) {
    case Topology::line: {
      const PureState a = random_pure_state(m0, rng);
      const PureState b = random_pure_state(m0, rng);
      ds.inputs = line_states(a, b, n);
      break;
    }
    case Topology::connected_clusters: {
      const int first = (n + 1) / 2;
      const PureState c0 = random_pure_state(m0, rng);
      const PureState c1 = random_pure_state(m0, rng);
      std::normal_distribution<double> normal(0.0, 1.0);
      for (int x = 0; x < n; ++x) {
        ComplexVector v = (x < first ? c0 : c1).amplitudes();
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          const double re = normal(rng);
          const double im = normal(rng);
          v(i) += delta * Complex{re, im} / std::sqrt(2.0);
        }
        v /= v.norm();
        ds.inputs.emplace_back(std::move(v));
      }
      break;
    }
    case Topology::custom:
      for (int x = 0; x < n; ++x) ds.inputs.push_back(random_pure_state(m0, rng));
      break;
  }

  ds.target_unitary = haar_random_unitary(m0, rng);
  for (int x : spec.supervised) {
    ds.supervised_targets.push_back(apply_unitary(ds.target_unitary, ds.inputs[x]));
  }
  for (int x : spec.test_indices()) {
    ds.test_targets.push_back(apply_unitary(ds.target_unitary, ds.inputs[x]));
  }
  ds.adjacency = adjacency_from_edges(n, spec.edges);
  return ds;
}

OperatorState density_of(const PureState& p) {
  const ComplexVector& v = p.amplitudes();
  return OperatorState::trusted(v * v.adjoint(), p.num_qubits());
}

PureState apply_unitary(const UnitaryMatrix& u, const PureState& p) {
  if (u.dim() != p.dim()) throw DimensionError("unitary and state dimensions differ");
  ComplexVector v = u.matrix() * p.amplitudes();
  // Renormalize roundoff so the stored state meets the 1e-12 norm contract.
  v /= v.norm();
  return PureState(std::move(v));
}

}  // namespace reshqcnn
