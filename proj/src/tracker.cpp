// qlouvain - tracker.cpp
#include "qlouvain/tracker.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace qlouvain {

IndexedSet::IndexedSet(std::size_t universe) : position_(universe, npos) {
  if (universe >= npos) throw std::length_error("IndexedSet universe too large");
}

bool IndexedSet::insert(std::size_t x) {
  if (position_[x] != npos) return false;
  position_[x] = static_cast<std::uint32_t>(items_.size());
  items_.push_back(static_cast<std::uint32_t>(x));
  return true;
}

bool IndexedSet::erase(std::size_t x) {
  const std::uint32_t pos = position_[x];
  if (pos == npos) return false;
  const std::uint32_t last = items_.back();
  items_[pos] = last;
  position_[last] = pos;
  items_.pop_back();
  position_[x] = npos;
  return true;
}

std::uint32_t IndexedSet::sample(Rng& rng) const {
  if (items_.empty()) throw std::out_of_range("sample from an empty marked set");
  return items_[uniform_index(rng, items_.size())];
}

bool operator==(const IndexedSet& a, const IndexedSet& b) {
  if (a.universe() != b.universe() || a.size() != b.size()) return false;
  return std::all_of(a.items_.begin(), a.items_.end(),
                     [&](std::uint32_t x) { return b.contains(x); });
}

IndexedSet build_marked_vertices(const CommunityState& state) {
  IndexedSet set(state.num_vertices());
  for (VertexId u = 0; u < state.num_vertices(); ++u) {
    if (state.has_good_move(u)) set.insert(u);
  }
  return set;
}

namespace {

void mark_edges_of(const CommunityState& state, VertexId u, std::vector<CommunityId>& targets,
                   IndexedSet& set) {
  const Graph& g = state.graph();
  targets.clear();
  state.good_targets(u, targets);
  for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
    const CommunityId c = state.label(g.edge_target(e).id);
    set.assign(e, std::find(targets.begin(), targets.end(), c) != targets.end());
  }
}

}  // namespace

IndexedSet build_marked_edges(const CommunityState& state) {
  IndexedSet set(state.graph().num_directed_edges());
  std::vector<CommunityId> targets;
  for (VertexId u = 0; u < state.num_vertices(); ++u) mark_edges_of(state, u, targets, set);
  return set;
}

MoveTracker::MoveTracker(const CommunityState& state, TrackerOptions options)
    : options_(options),
      vertices_(options.vertices ? build_marked_vertices(state) : IndexedSet(0)),
      edges_(options.edges ? build_marked_edges(state) : IndexedSet(0)) {
  const std::size_t n = state.num_vertices();
  members_.resize(n);
  member_slot_.resize(n);
  for (VertexId u = 0; u < n; ++u) {
    auto& list = members_[state.label(u)];
    member_slot_[u] = static_cast<std::uint32_t>(list.size());
    list.push_back(u);
  }
  stamp_.assign(n, 0);
}

void MoveTracker::collect(VertexId w) {
  if (stamp_[w] == epoch_) return;
  stamp_[w] = epoch_;
  changeable_.push_back(w);
}

void MoveTracker::refresh_vertex(const CommunityState& state, VertexId w) {
  if (options_.vertices) vertices_.assign(w, state.has_good_move(w));
  if (options_.edges) mark_edges_of(state, w, targets_, edges_);
}

void MoveTracker::update_after_move(const CommunityState& state, VertexId u, CommunityId from,
                                   CommunityId to) {
  // Move u between member lists.
  {
    auto& src = members_[from];
    const std::uint32_t slot = member_slot_[u];
    src[slot] = src.back();
    member_slot_[src[slot]] = slot;
    src.pop_back();
    auto& dst = members_[to];
    member_slot_[u] = static_cast<std::uint32_t>(dst.size());
    dst.push_back(u);
  }

  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  changeable_.clear();
  const Graph& g = state.graph();
  collect(u);
  for (CommunityId c : {from, to}) {
    for (VertexId v : members_[c]) {
      collect(v);
      for (const Neighbor& nb : g.neighbors(v)) collect(nb.id);
    }
  }
  // u left `from`, so its neighbours are covered through `to`.
  for (VertexId w : changeable_) refresh_vertex(state, w);
  last_changeable_ = changeable_.size();
}

void MoveTracker::audit(const CommunityState& state) const {
  if (options_.vertices && !(vertices_ == build_marked_vertices(state))) {
    throw std::logic_error("tracker audit: marked vertex set diverged from rebuild");
  }
  if (options_.edges && !(edges_ == build_marked_edges(state))) {
    throw std::logic_error("tracker audit: marked edge set diverged from rebuild");
  }
  for (VertexId u = 0; u < state.num_vertices(); ++u) {
    const auto& list = members_[state.label(u)];
    if (member_slot_[u] >= list.size() || list[member_slot_[u]] != u) {
      throw std::logic_error("tracker audit: member list out of sync at vertex " +
                             std::to_string(u));
    }
  }
}

}  // namespace qlouvain
