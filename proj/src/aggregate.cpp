// qlouvain - aggregate.cpp
#include <algorithm>

#include "qlouvain/graph.hpp"

namespace qlouvain {

Aggregation aggregate(const Graph& g, std::span<const CommunityId> labels) {
  const std::size_t n = g.num_vertices();
  if (labels.size() != n) {
    throw GraphError(GraphErrorKind::invalid_argument,
                     "aggregate: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(n) + " vertices");
  }
  constexpr VertexId unset = static_cast<VertexId>(-1);
  const CommunityId max_label = n == 0 ? 0 : *std::max_element(labels.begin(), labels.end());
  std::vector<VertexId> coarse_of_label(static_cast<std::size_t>(max_label) + 1, unset);
  for (CommunityId c : labels) coarse_of_label[c] = 0;
  VertexId coarse_n = 0;
  for (auto& slot : coarse_of_label) {
    if (slot != unset) slot = coarse_n++;
  }

  Aggregation out;
  out.coarse_vertex.resize(n);
  for (std::size_t u = 0; u < n; ++u) out.coarse_vertex[u] = coarse_of_label[labels[u]];

  // Members grouped by coarse vertex (counting sort keeps it one pass).
  std::vector<std::size_t> start(coarse_n + 1, 0);
  for (VertexId a : out.coarse_vertex) ++start[a + 1];
  for (VertexId a = 0; a < coarse_n; ++a) start[a + 1] += start[a];
  std::vector<VertexId> members(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t u = 0; u < n; ++u) {
      members[fill[out.coarse_vertex[u]]++] = static_cast<VertexId>(u);
    }
  }

  // Each coarse pair (a, b) with a < b is summed from a's side only, so the
  // stored weight does not depend on which endpoint is visited first.
  std::vector<double> self(coarse_n, 0.0);
  std::vector<double> acc(coarse_n, 0.0);
  std::vector<VertexId> touched;
  std::vector<Edge> edges;
  for (VertexId a = 0; a < coarse_n; ++a) {
    for (std::size_t i = start[a]; i < start[a + 1]; ++i) {
      const VertexId u = members[i];
      self[a] += g.self_weight(u);
      for (const Neighbor& nb : g.neighbors(u)) {
        const VertexId b = out.coarse_vertex[nb.id];
        if (b == a) {
          self[a] += nb.weight;
        } else if (b > a) {
          if (acc[b] == 0.0) touched.push_back(b);
          acc[b] += nb.weight;
        }
      }
    }
    std::sort(touched.begin(), touched.end());
    for (VertexId b : touched) {
      edges.push_back({a, b, acc[b]});
      acc[b] = 0.0;
    }
    touched.clear();
  }
  out.graph = Graph::from_edges(coarse_n, edges, std::move(self));
  return out;
}

}  // namespace qlouvain
