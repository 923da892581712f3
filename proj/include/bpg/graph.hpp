#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace bpg {

using VertexId = int;
using EdgeId = int;

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  /// Free-form label set by lattice builders (e.g. lattice axis); -1 if unused.
  int tag = -1;
};

/// A directed edge is an edge id plus the vertex it leaves. Parallel edges
/// stay distinct because identity is by edge id, not endpoints.
struct DirectedEdge {
  EdgeId edge = 0;
  VertexId source = 0;
  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

/// Undirected connected multigraph without self-loops. Vertices are
/// 0..n-1; edge ids are positions in the edge list. The incident edges of a
/// vertex are kept in ascending edge-id order, which fixes the bond axis
/// order of every vertex tensor.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidSpec on self-loops, out-of-range endpoints, or a
  /// disconnected result.
  Graph(int num_vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
        std::vector<std::string> labels = {}, std::vector<int> tags = {});

  int num_vertices() const { return static_cast<int>(incident_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const EdgeId> incident(VertexId v) const { return incident_[static_cast<std::size_t>(v)]; }
  int degree(VertexId v) const { return static_cast<int>(incident(v).size()); }
  VertexId other(EdgeId e, VertexId v) const;
  /// Position of edge `e` among the incident edges of `v`.
  std::size_t slot(VertexId v, EdgeId e) const;
  const std::string& label(VertexId v) const { return labels_[static_cast<std::size_t>(v)]; }

  bool is_tree() const { return num_edges() == num_vertices() - 1; }
  /// Two-coloring, if the graph is bipartite.
  std::optional<std::vector<int>> bipartition() const;
  /// Breadth-first vertex order from `root`, neighbors visited in incidence order.
  std::vector<VertexId> bfs_order(VertexId root = 0) const;
  /// rank[v] = position of v in bfs_order(root).
  std::vector<int> bfs_rank(VertexId root = 0) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<std::string> labels_;
};

/// Default sequential message schedule. With BFS ranks from vertex 0, the
/// first half holds every directed edge pointing to a lower-ranked vertex,
/// sources in descending rank; the second half every directed edge pointing
/// to a higher-ranked vertex, sources in ascending rank. Each directed edge
/// appears once, edges leaving one vertex are contiguous, and on a tree one
/// pass produces exact messages.
std::vector<DirectedEdge> default_edge_order(const Graph& g);

/// Undirected edges ordered by (min rank, max rank, id) of their endpoints.
std::vector<EdgeId> bfs_edge_order(const Graph& g);

/// Index of a directed edge in a flat array of size 2|E|: 2e for the
/// direction leaving the edge's `u`, 2e+1 for the one leaving `v`.
inline std::size_t directed_slot(const Graph& g, DirectedEdge d) {
  return 2 * static_cast<std::size_t>(d.edge) + (g.edge(d.edge).u == d.source ? 0 : 1);
}

inline DirectedEdge reversed(const Graph& g, DirectedEdge d) { return {d.edge, g.other(d.edge, d.source)}; }

}  // namespace bpg
