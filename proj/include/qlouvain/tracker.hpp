// qlouvain - tracker.hpp
// Exact sets of vertices (and directed edges) that currently have a
// modularity-increasing move, kept up to date after each move by
// re-examining only the vertices the move can affect. The simulators use
// these to know t, the number of marked items; none of the evaluations here
// are counted.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qlouvain/community.hpp"
#include "qlouvain/rng.hpp"

namespace qlouvain {

// Subset of [0, universe) with O(1) insert, erase, membership and uniform
// sampling (swap-remove array plus position map).
class IndexedSet {
 public:
  explicit IndexedSet(std::size_t universe = 0);

  std::size_t universe() const { return position_.size(); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(std::size_t x) const { return position_[x] != npos; }
  std::span<const std::uint32_t> items() const { return items_; }

  bool insert(std::size_t x);
  bool erase(std::size_t x);
  void assign(std::size_t x, bool member) { member ? (void)insert(x) : (void)erase(x); }
  // Throws std::out_of_range when empty.
  std::uint32_t sample(Rng& rng) const;

  friend bool operator==(const IndexedSet& a, const IndexedSet& b);

 private:
  static constexpr std::uint32_t npos = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> items_;
  std::vector<std::uint32_t> position_;
};

// Exhaustive constructions, also used as audit oracles.
IndexedSet build_marked_vertices(const CommunityState& state);
// Directed edge e = (u, v) is marked when label(v) != label(u) and moving u
// into label(v) increases modularity.
IndexedSet build_marked_edges(const CommunityState& state);

struct TrackerOptions {
  bool vertices = true;
  bool edges = false;
};

class MoveTracker {
 public:
  explicit MoveTracker(const CommunityState& state, TrackerOptions options = {});

  const IndexedSet& marked_vertices() const { return vertices_; }
  const IndexedSet& marked_edges() const { return edges_; }
  bool tracks_vertices() const { return options_.vertices; }
  bool tracks_edges() const { return options_.edges; }
  std::span<const VertexId> members(CommunityId c) const { return members_[c]; }

  // Call after state.apply_move(u, to) moved u out of `from`.
  void update_after_move(const CommunityState& state, VertexId u, CommunityId from,
                         CommunityId to);
  // Vertices re-examined by the last update.
  std::size_t last_changeable() const { return last_changeable_; }

  VertexId sample_marked(Rng& rng) const { return vertices_.sample(rng); }
  std::size_t sample_marked_edge(Rng& rng) const { return edges_.sample(rng); }

  // Compares every tracked set with an exhaustive rebuild; throws
  // std::logic_error on divergence.
  void audit(const CommunityState& state) const;

 private:
  void refresh_vertex(const CommunityState& state, VertexId w);
  void collect(VertexId w);

  TrackerOptions options_;
  IndexedSet vertices_;
  IndexedSet edges_;
  std::vector<std::vector<VertexId>> members_;
  std::vector<std::uint32_t> member_slot_;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<VertexId> changeable_;
  std::vector<CommunityId> targets_;
  std::size_t last_changeable_ = 0;
};

}  // namespace qlouvain
