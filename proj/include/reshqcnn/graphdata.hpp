#pragma once

// Graph-structured quantum datasets: vertex input states whose closeness
// follows a graph, a hidden target unitary V, and the supervised/test split.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "reshqcnn/cost.hpp"
#include "reshqcnn/qlinalg.hpp"

namespace reshqcnn {

enum class Topology { line, connected_clusters, custom };

std::string to_string(Topology t);
Topology parse_topology(std::string_view text);

struct GraphSpec {
  Topology topology = Topology::line;
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> supervised;  // ascending

  /// Throws ConfigError on out-of-range indices, self loops or duplicates.
  void validate() const;
  /// Complement of `supervised`, ascending.
  std::vector<int> test_indices() const;
};

/// Evenly spaced supervised indices: i * ceil(n/s) when that fits inside
/// [0, n), otherwise floor(i * n / s).
std::vector<int> default_supervised(int n, int s);

/// line: chain (i, i+1). connected_clusters: complete graphs on the first
/// ceil(n/2) and last floor(n/2) vertices, bridged by one edge between the
/// last vertex of the first cluster and the first of the second.
/// `supervised` overrides the default placement when given.
GraphSpec build_graph_spec(Topology topology, int n, int s,
                           std::optional<std::vector<int>> supervised = std::nullopt);

/// Custom topology from an explicit edge list.
GraphSpec custom_graph_spec(int n, std::vector<std::pair<int, int>> edges,
                            std::vector<int> supervised);

/// 0/1 symmetrization of an edge list.
AdjacencyMatrix adjacency_from_edges(int n, const std::vector<std::pair<int, int>>& edges);

struct GraphDataset {
  GraphSpec spec;
  int input_qubits = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<PureState> inputs;
  UnitaryMatrix target_unitary;
  std::vector<PureState> supervised_targets;  // aligned with spec.supervised
  std::vector<PureState> test_targets;        // aligned with spec.test_indices()
  AdjacencyMatrix adjacency;
};

/// Vertex inputs realize the graph's closeness:
///   line     - points on the Fubini-Study geodesic between two random pure
///              endpoints, vertex x at parameter x/(N-1);
///   clusters - a random centre per cluster plus complex Gaussian noise of
///              amplitude delta, renormalized;
///   custom   - independent random states.
/// V is Haar-random on m0 qubits; targets are V applied to the inputs.
GraphDataset generate_dataset(const GraphSpec& spec, int m0, double delta, Rng& rng);

/// n points on the geodesic from a to b, vertex x at parameter x/(n-1).
std::vector<PureState> line_states(const PureState& a, const PureState& b, int n);

/// |phi><phi|.
OperatorState density_of(const PureState& p);

/// Applies a unitary to a pure state.
PureState apply_unitary(const UnitaryMatrix& u, const PureState& p);

}  // namespace reshqcnn
