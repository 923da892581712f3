#include "bpg/graph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "bpg/errors.hpp"

namespace bpg {

Graph::Graph(int num_vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
             std::vector<std::string> labels, std::vector<int> tags)
    : incident_(static_cast<std::size_t>(num_vertices)), labels_(std::move(labels)) {
  if (num_vertices < 1) throw InvalidSpec("graph needs at least one vertex");
  if (!tags.empty() && tags.size() != edges.size()) throw InvalidSpec("one tag per edge required");
  if (labels_.empty()) {
    for (int v = 0; v < num_vertices; ++v) labels_.push_back(std::to_string(v));
  }
  if (static_cast<int>(labels_.size()) != num_vertices) throw InvalidSpec("one label per vertex required");
  edges_.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices) throw InvalidSpec("edge endpoint out of range");
    if (u == v) throw InvalidSpec("self-loops are not allowed");
    const EdgeId id = static_cast<EdgeId>(i);
    edges_.push_back(Edge{id, u, v, tags.empty() ? -1 : tags[i]});
    incident_[static_cast<std::size_t>(u)].push_back(id);
    incident_[static_cast<std::size_t>(v)].push_back(id);
  }
  if (static_cast<int>(bfs_order(0).size()) != num_vertices) throw InvalidSpec("graph is not connected");
}

VertexId Graph::other(EdgeId e, VertexId v) const {
  const Edge& ed = edge(e);
  return ed.u == v ? ed.v : ed.u;
}

std::size_t Graph::slot(VertexId v, EdgeId e) const {
  auto inc = incident(v);
  auto it = std::find(inc.begin(), inc.end(), e);
  if (it == inc.end()) throw InvalidSpec("edge is not incident to vertex");
  return static_cast<std::size_t>(it - inc.begin());
}

std::optional<std::vector<int>> Graph::bipartition() const {
  std::vector<int> color(incident_.size(), -1);
  for (VertexId v : bfs_order(0)) {
    if (color[static_cast<std::size_t>(v)] < 0) color[static_cast<std::size_t>(v)] = 0;
    for (EdgeId e : incident(v)) {
      const VertexId w = other(e, v);
      int& cw = color[static_cast<std::size_t>(w)];
      if (cw < 0) {
        cw = 1 - color[static_cast<std::size_t>(v)];
      } else if (cw == color[static_cast<std::size_t>(v)]) {
        return std::nullopt;
      }
    }
  }
  return color;
}

std::vector<VertexId> Graph::bfs_order(VertexId root) const {
  std::vector<char> seen(incident_.size(), 0);
  std::vector<VertexId> order;
  std::deque<VertexId> queue{root};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    order.push_back(v);
    for (EdgeId e : incident(v)) {
      const VertexId w = other(e, v);
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return order;
}

std::vector<int> Graph::bfs_rank(VertexId root) const {
  std::vector<int> rank(incident_.size(), 0);
  const auto order = bfs_order(root);
  for (std::size_t i = 0; i < order.size(); ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
  return rank;
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
  for (int e = 0; e < a.num_edges(); ++e) {
    const Edge& x = a.edge(e);
    const Edge& y = b.edge(e);
    if (x.u != y.u || x.v != y.v || x.tag != y.tag) return false;
  }
  return a.labels_ == b.labels_;
}

std::vector<DirectedEdge> default_edge_order(const Graph& g) {
  const auto order = g.bfs_order(0);
  const auto rank = g.bfs_rank(0);
  std::vector<DirectedEdge> out;
  out.reserve(2 * static_cast<std::size_t>(g.num_edges()));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (EdgeId e : g.incident(*it)) {
      if (rank[static_cast<std::size_t>(g.other(e, *it))] < rank[static_cast<std::size_t>(*it)]) out.push_back({e, *it});
    }
  }
  for (VertexId v : order) {
    for (EdgeId e : g.incident(v)) {
      if (rank[static_cast<std::size_t>(g.other(e, v))] > rank[static_cast<std::size_t>(v)]) out.push_back({e, v});
    }
  }
  return out;
}

std::vector<EdgeId> bfs_edge_order(const Graph& g) {
  const auto rank = g.bfs_rank(0);
  std::vector<EdgeId> ids(static_cast<std::size_t>(g.num_edges()));
  for (int e = 0; e < g.num_edges(); ++e) ids[static_cast<std::size_t>(e)] = e;
  auto key = [&](EdgeId e) {
    const int a = rank[static_cast<std::size_t>(g.edge(e).u)];
    const int b = rank[static_cast<std::size_t>(g.edge(e).v)];
    return std::make_tuple(std::min(a, b), std::max(a, b), e);
  };
  std::sort(ids.begin(), ids.end(), [&](EdgeId x, EdgeId y) { return key(x) < key(y); });
  return ids;
}

}  // namespace bpg
