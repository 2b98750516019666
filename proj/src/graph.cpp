// qlouvain - graph.cpp
#include "qlouvain/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qlouvain {

namespace {

std::string pair_text(VertexId u, VertexId v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges,
                        std::vector<double> self_weight) {
  if (n > std::numeric_limits<VertexId>::max()) {
    throw GraphError(GraphErrorKind::invalid_argument, "too many vertices");
  }
  if (!self_weight.empty() && self_weight.size() != n) {
    throw GraphError(GraphErrorKind::invalid_argument,
                     "self weight vector does not match vertex count");
  }
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw GraphError(GraphErrorKind::invalid_argument,
                       "edge " + pair_text(e.u, e.v) + " out of range");
    }
    if (e.u == e.v) {
      throw GraphError(GraphErrorKind::self_loop,
                       "self-loop on vertex " + std::to_string(e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw GraphError(GraphErrorKind::invalid_argument,
                       "edge " + pair_text(e.u, e.v) + " has non-positive weight");
    }
    ++g.offsets_[e.u + 1];
    ++g.offsets_[e.v + 1];
  }
  for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] += g.offsets_[u];

  g.adjacency_.resize(2 * edges.size());
  g.sources_.resize(2 * edges.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : edges) {
    g.adjacency_[fill[e.u]++] = {e.v, e.weight};
    g.adjacency_[fill[e.v]++] = {e.u, e.weight};
  }

  g.strength_.assign(n, 0.0);
  double twice_w = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) {
      return a.id == b.id;
    });
    if (dup != last) {
      throw GraphError(GraphErrorKind::duplicate_edge,
                       "duplicate edge " + pair_text(static_cast<VertexId>(u), dup->id));
    }
    double s = self_weight.empty() ? 0.0 : self_weight[u];
    if (s < 0.0 || !std::isfinite(s)) {
      throw GraphError(GraphErrorKind::invalid_argument, "negative self weight");
    }
    for (auto it = first; it != last; ++it) s += it->weight;
    for (std::size_t e = g.offsets_[u]; e < g.offsets_[u + 1]; ++e) {
      g.sources_[e] = static_cast<VertexId>(u);
    }
    g.strength_[u] = s;
    twice_w += s;
    g.max_degree_ = std::max(g.max_degree_, g.offsets_[u + 1] - g.offsets_[u]);
  }
  g.total_weight_ = twice_w / 2.0;
  if (std::any_of(self_weight.begin(), self_weight.end(), [](double w) { return w != 0.0; })) {
    g.self_weight_ = std::move(self_weight);
  }
  return g;
}

std::optional<std::size_t> Graph::neighbor_index(VertexId u, VertexId v) const {
  if (u >= num_vertices()) {
    throw std::out_of_range("neighbor_index: vertex " + std::to_string(u) + " out of range");
  }
  const auto adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v,
                             [](const Neighbor& a, VertexId id) { return a.id < id; });
  if (it == adj.end() || it->id != v) return std::nullopt;
  return static_cast<std::size_t>(it - adj.begin());
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < num_vertices(); ++u) {
    for (const Neighbor& nb : neighbors(u)) {
      if (u < nb.id) out.push_back({u, nb.id, nb.weight});
    }
  }
  return out;
}

}  // namespace qlouvain
