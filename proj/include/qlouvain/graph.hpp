// qlouvain - graph.hpp
// Undirected weighted graph in compressed adjacency form, edge-list I/O,
// the fixed-community-size generator and community aggregation.
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlouvain {

using VertexId = std::uint32_t;
using CommunityId = std::uint32_t;

struct Neighbor {
  VertexId id;
  double weight;
};

struct Edge {
  VertexId u;
  VertexId v;
  double weight = 1.0;
};

enum class GraphErrorKind {
  parse,
  self_loop,
  duplicate_edge,
  empty_graph,
  infeasible,
  invalid_argument,
  io,
};

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  GraphErrorKind kind() const noexcept { return kind_; }

 private:
  GraphErrorKind kind_;
};

// Immutable after construction. Adjacency lists are strictly sorted by
// neighbour id and never contain the vertex itself. A coarse graph produced
// by aggregate() may carry per-vertex self weight A_uu (twice the internal
// weight of the contracted community); it is part of the strength but not of
// the adjacency.
class Graph {
 public:
  Graph() = default;

  // Each unordered pair may appear at most once; weights must be positive
  // and finite. self_weight is either empty or has n entries.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<double> self_weight = {});

  std::size_t num_vertices() const { return strength_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }
  std::size_t num_directed_edges() const { return adjacency_.size(); }

  std::span<const Neighbor> neighbors(VertexId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::size_t degree(VertexId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::size_t max_degree() const { return max_degree_; }
  double strength(VertexId u) const { return strength_[u]; }
  double self_weight(VertexId u) const {
    return self_weight_.empty() ? 0.0 : self_weight_[u];
  }
  bool has_self_weight() const { return !self_weight_.empty(); }
  double total_weight() const { return total_weight_; }

  // Position of v in u's adjacency list, found by binary search.
  std::optional<std::size_t> neighbor_index(VertexId u, VertexId v) const;

  // Directed edge ids are positions in the concatenated adjacency array.
  std::size_t edge_begin(VertexId u) const { return offsets_[u]; }
  std::size_t edge_end(VertexId u) const { return offsets_[u + 1]; }
  VertexId edge_source(std::size_t e) const { return sources_[e]; }
  const Neighbor& edge_target(std::size_t e) const { return adjacency_[e]; }

  // Undirected edges with u < v, in (u, v) order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<VertexId> sources_;
  std::vector<double> strength_;
  std::vector<double> self_weight_;
  double total_weight_ = 0.0;
  std::size_t max_degree_ = 0;
};

// Edge list: one "u v [w]" per line, 0-based ids, '#' starts a comment line.
// A "# fcs n=<n> ..." line fixes the vertex count so trailing isolated
// vertices survive a round trip.
Graph parse_edge_list(std::istream& in, std::string_view source = "<stream>");
Graph load_edge_list(const std::filesystem::path& path);
void write_edge_list(std::ostream& out, const Graph& g,
                     std::string_view header_line = {});

struct FcsConfig {
  std::size_t n = 0;
  double avg_degree = 0.0;
  std::size_t community_size = 0;
  double mu = 0.0;
  std::uint64_t seed = 0;
};

// Throws GraphError(infeasible or invalid_argument) when the configuration
// cannot produce a graph.
void validate(const FcsConfig& cfg);
std::size_t fcs_edge_count(const FcsConfig& cfg);
// Planted block of u: u / S.
std::vector<CommunityId> fcs_blocks(const FcsConfig& cfg);
std::string fcs_header(const FcsConfig& cfg);
Graph generate_fcs(const FcsConfig& cfg);

struct Aggregation {
  Graph graph;
  // Coarse vertex of every fine vertex.
  std::vector<VertexId> coarse_vertex;
};

// One coarse vertex per non-empty community, numbered in ascending community
// id order. Cross-community weight becomes coarse edges; weight inside a
// community is kept as the coarse vertex's self weight.
Aggregation aggregate(const Graph& g, std::span<const CommunityId> labels);

}  // namespace qlouvain
