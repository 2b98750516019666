// qlouvain - sim.hpp
// Runs the classical Louvain variants to completion while tallying actual
// gain evaluations and the estimated query counts of their quantum
// counterparts.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlouvain/community.hpp"
#include "qlouvain/graph.hpp"
#include "qlouvain/qcost.hpp"
#include "qlouvain/rng.hpp"

namespace qlouvain {

enum class Algorithm { ol, ol_replace, ql, sql, eql };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

// Estimate columns carried by the ledger. OL and OLR have none.
enum class Variant { ql, qlsg, sql, sqlsg, eql };
inline constexpr std::size_t kVariantCount = 5;
std::string_view to_string(Variant v);
std::vector<Variant> variants_of(Algorithm a);

inline constexpr double kNoEstimate = std::numeric_limits<double>::quiet_NaN();

struct MoveRecord {
  std::size_t level = 0;
  std::uint64_t k = 0;  // move index within the run; phase-end records repeat the last k
  Algorithm algorithm = Algorithm::ol;
  std::size_t list_size = 0;
  std::int64_t t = -1;  // marked items when the search ran, -1 if unknown
  std::uint64_t classical_calls = 0;
  // Random vertex or edge draws spent locating the moved item (sampling
  // variants only; not part of the CSV).
  std::uint64_t draws = 0;
  double estimates[kVariantCount] = {kNoEstimate, kNoEstimate, kNoEstimate, kNoEstimate,
                                     kNoEstimate};
  double delta = kNoEstimate;  // gain of the move, NaN on phase-end records
};

class QueryLedger {
 public:
  explicit QueryLedger(bool keep_records = false) : keep_records_(keep_records) {}

  void add(const MoveRecord& r);
  bool keeps_records() const { return keep_records_; }
  const std::vector<MoveRecord>& records() const { return records_; }
  std::uint64_t classical_calls() const { return classical_calls_; }
  // Sum of the variant's estimates; NaN when the variant never appeared.
  double total(Variant v) const;
  std::size_t record_count() const { return record_count_; }
  // Smallest estimate over all records and variants (for sanity checks).
  double min_estimate() const { return min_estimate_; }

  // level,k,algo,list_size,t,classical_calls,est_ql,est_qlsg,est_sql,est_sqlsg,est_eql,delta
  void write_csv(std::ostream& out) const;

 private:
  bool keep_records_;
  std::vector<MoveRecord> records_;
  std::uint64_t classical_calls_ = 0;
  double totals_[kVariantCount] = {0, 0, 0, 0, 0};
  bool seen_[kVariantCount] = {false, false, false, false, false};
  std::size_t record_count_ = 0;
  double min_estimate_ = std::numeric_limits<double>::infinity();
};

// Number of classical draws before the quantum search. Starts at the
// configured value and drops to 0 for the rest of the phase after that many
// consecutive unmarked draws.
class NsamplesPolicy {
 public:
  explicit NsamplesPolicy(std::size_t initial = 130) : initial_(initial), current_(initial) {}

  std::size_t current() const { return current_; }
  std::size_t consecutive_misses() const { return misses_; }
  void record_draw(bool marked);
  // Deterministic stand-in for the draws: switch off once t/L <= 1/initial.
  void observe_fraction(std::size_t t, std::size_t L);
  void reset();

 private:
  std::size_t initial_;
  std::size_t current_;
  std::size_t misses_ = 0;
};

enum class MaxFindMethod { classical, quantum };

struct MaxFindCost {
  double queries = 0.0;
  MaxFindMethod method = MaxFindMethod::classical;
};

// Cheaper of a classical scan over delta_u communities and quantum maximum
// finding.
MaxFindCost maxfind_cost(std::size_t delta_u, double eps, const CostParams& p = {});

// 2 W^2: moves cannot exceed this on integer-weighted graphs since each one
// raises modularity by at least 1/W^2.
double max_moves_bound(const Graph& g);

// ---- FindFirst simulation -------------------------------------------------

struct VertexFindCharge {
  double ql = 0.0;
  double qlsg = 0.0;
  // Index of a marked item returned by the search (any marked index in the
  // segment when t > 0).
  std::optional<std::size_t> found;
};

// The list being searched, as seen by the simulation.
class SegmentOracle {
 public:
  virtual ~SegmentOracle() = default;
  virtual bool marked(std::size_t index) const = 0;
  // Charges for checking item `index` classically inside a segment of
  // `segment_length` items searched with failure probability zeta.
  virtual double ql_check_cost(std::size_t index, double zeta, std::size_t segment_length) = 0;
  virtual double qlsg_check_cost(std::size_t index) = 0;
  // One VertexFind over [begin, end) containing t marked items.
  virtual VertexFindCharge vertexfind(std::size_t begin, std::size_t end, std::size_t t,
                                      double zeta) = 0;
};

struct FindFirstResult {
  std::optional<std::size_t> found;
  double ql = 0.0;
  double qlsg = 0.0;
  std::size_t vertexfind_calls = 0;
  std::size_t classical_checks = 0;
};

// Doubling segments [0,0], [1,1], [2,3], [4,7], ... until one holds a marked
// item, then binary search inside it for the first one. Segments shorter
// than lswitch are scanned classically.
FindFirstResult simulate_find_first(SegmentOracle& oracle, std::size_t length, double zeta,
                                    std::size_t lswitch);

// ---- runners --------------------------------------------------------------

struct SimOptions {
  CostParams params;
  bool use_cache = true;  // OL only: false rebuilds each community list on visit
  bool deterministic_nsamples = false;
  // Exhaustive tracker, state and modularity checks after every move.
  bool audit = false;
  bool keep_records = false;
  std::chrono::milliseconds timeout{0};  // 0 disables the cap
};

struct RunResult {
  Algorithm algorithm = Algorithm::ol;
  std::uint64_t seed = 0;
  std::vector<CommunityId> partition;  // final community of every input vertex
  double modularity = 0.0;
  QueryLedger ledger;
  std::uint64_t moves = 0;
  std::size_t levels = 0;
  // Gain evaluations counted by the community state over all levels.
  std::uint64_t gain_evaluations = 0;
  double move_budget = 0.0;
  bool budget_exceeded = false;
  bool timed_out = false;
  std::size_t peak_memory_bytes = 0;
  // Smallest modularity increase of any move (checked only in audit mode).
  double min_move_gain = std::numeric_limits<double>::infinity();
};

RunResult run_ol(const Graph& g, std::uint64_t seed, const SimOptions& opt = {});
RunResult run_ol_replacement(const Graph& g, std::uint64_t seed, const SimOptions& opt = {});
RunResult run_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt = {});
RunResult run_simple_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt = {});
RunResult run_edge_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt = {});
RunResult run_algorithm(Algorithm a, const Graph& g, std::uint64_t seed,
                        const SimOptions& opt = {});

// "u label" per line.
void write_partition(std::ostream& out, std::span<const CommunityId> labels);

}  // namespace qlouvain
