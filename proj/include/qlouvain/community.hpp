// qlouvain - community.hpp
// Partition state with per-vertex community adjacency lists. Every
// evaluation of the modularity gain that the simulated algorithms would pay
// for goes through delta(), best_move() or is_good() and is counted.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qlouvain/graph.hpp"

namespace qlouvain {

// Gain of moving u (strength s_u, weight S_own into its current community,
// which has total strength sigma_own including s_u) into a community with
// total strength sigma_target that receives weight S_target from u.
inline double modularity_gain(double s_u, double sigma_own, double sigma_target,
                              double s_target, double s_own, double total_weight) {
  const double w = total_weight;
  return (s_target - s_own) / w -
         s_u * (sigma_target - sigma_own + s_u) / (2.0 * w * w);
}

// Modularity of a labelling, including the diagonal terms.
double modularity(const Graph& g, std::span<const CommunityId> labels);

struct CommunityWeight {
  CommunityId community;
  std::uint32_t edges;  // number of neighbours in the community
  double weight;        // weight from the owning vertex into the community
};

struct MoveDelta {
  VertexId vertex = 0;
  std::optional<CommunityId> target;
  double gain = 0.0;
};

class CommunityState {
 public:
  // Singleton partition: vertex u starts in community u.
  explicit CommunityState(const Graph& g);

  const Graph& graph() const { return *graph_; }
  std::size_t num_vertices() const { return labels_.size(); }
  CommunityId label(VertexId u) const { return labels_[u]; }
  std::span<const CommunityId> labels() const { return labels_; }
  double sigma(CommunityId c) const { return sigma_[c]; }
  // Communities adjacent to u, sorted by id. The entry for u's own community
  // is present only while u has a neighbour inside it.
  std::span<const CommunityWeight> eta(VertexId u) const {
    return {entries_.data() + graph_->edge_begin(u), eta_size_[u]};
  }
  double own_weight(VertexId u) const { return own_[u]; }
  // |eta_u| and its current maximum over all vertices.
  std::size_t neighbor_communities(VertexId u) const { return eta_size_[u]; }
  std::size_t delta_max() const { return delta_max_; }

  // Counted: one evaluation per call. alpha must be u's community or
  // adjacent to u, otherwise std::invalid_argument.
  MoveDelta delta(VertexId u, CommunityId alpha);
  // Counted: one evaluation per adjacent community, no early exit. Ties go
  // to the smallest community id; a vertex without neighbours has no target.
  MoveDelta best_move(VertexId u);
  // Counted: stops at the first community with positive gain.
  bool is_good(VertexId u);

  // Uncounted versions for bookkeeping that the simulated algorithm would
  // not perform.
  double gain(VertexId u, CommunityId alpha) const;
  bool has_good_move(VertexId u) const;
  // Evaluations an early-exit scan of u would spend.
  std::size_t good_scan_cost(VertexId u) const;
  // Appends the communities alpha != label(u) with positive gain for u.
  void good_targets(VertexId u, std::vector<CommunityId>& out) const;

  // beta must differ from u's community and be adjacent to u.
  void apply_move(VertexId u, CommunityId beta);

  double modularity() const;
  std::uint64_t gain_evaluations() const { return gain_evaluations_; }
  // Bytes held by the partition and community adjacency lists.
  std::size_t memory_bytes() const;
  // Recomputes every sum from scratch; throws std::logic_error on mismatch.
  void audit(double tolerance = 1e-9) const;

 private:
  double gain_from(VertexId u, CommunityId alpha, double s_alpha) const;
  // Both return the weight left in the entry afterwards (0 once removed).
  double add_weight(VertexId v, CommunityId c, double w);
  double remove_weight(VertexId v, CommunityId c, double w);
  void resize_tracked(std::size_t old_size, std::size_t new_size);
  void refresh_own(VertexId v);
  CommunityWeight* slot_begin(VertexId v) { return entries_.data() + graph_->edge_begin(v); }

  const Graph* graph_;
  std::vector<CommunityId> labels_;
  std::vector<double> sigma_;
  // eta_u lives in entries_[edge_begin(u), edge_begin(u) + eta_size_[u]);
  // it never has more entries than u has neighbours.
  std::vector<CommunityWeight> entries_;
  std::vector<std::uint32_t> eta_size_;
  std::vector<double> own_;
  std::vector<std::uint32_t> size_histogram_;
  std::size_t delta_max_ = 0;
  std::uint64_t gain_evaluations_ = 0;
};

}  // namespace qlouvain
