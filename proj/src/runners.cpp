// qlouvain - runners.cpp
// Multi-level driver plus the per-level move loops of each variant.
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qlouvain/sim.hpp"
#include "qlouvain/tracker.hpp"

namespace qlouvain {

namespace {

class Deadline {
 public:
  explicit Deadline(std::chrono::milliseconds limit)
      : enabled_(limit.count() > 0), end_(std::chrono::steady_clock::now() + limit) {}

  bool expired() {
    if (!enabled_) return false;
    if (++ticks_ % 256 != 0) return hit_;
    hit_ = hit_ || std::chrono::steady_clock::now() >= end_;
    return hit_;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point end_;
  std::uint64_t ticks_ = 0;
  bool hit_ = false;
};

// State shared by all levels of one run.
struct RunContext {
  const SimOptions& opt;
  RunResult& result;
  Deadline deadline;
  Rng order_rng;  // choices the simulated algorithm itself makes
  Rng sim_rng;    // choices that only shape the cost estimate
  double eps;
  std::uint64_t k = 0;
  double move_cap;

  void record(MoveRecord r) { result.ledger.add(r); }
};

struct LevelOutcome {
  std::vector<CommunityId> labels;
  std::uint64_t moves = 0;
  bool timed_out = false;
  std::size_t memory_bytes = 0;
  std::uint64_t gain_evaluations = 0;
};

// Per-move checks enabled by SimOptions::audit.
class MoveAudit {
 public:
  MoveAudit(RunContext& ctx) : ctx_(ctx) {}

  template <class QFn>
  void before(QFn&& q) {
    if (ctx_.opt.audit) q_before_ = q();
  }

  template <class QFn>
  void after(QFn&& q, double gain) {
    if (!ctx_.opt.audit) return;
    const double dq = q() - q_before_;
    if (!(dq > 0.0)) {
      throw std::logic_error("move did not increase modularity (change " + std::to_string(dq) +
                             ")");
    }
    if (std::abs(dq - gain) > 1e-9) {
      throw std::logic_error("predicted gain differs from modularity change");
    }
    ctx_.result.min_move_gain = std::min(ctx_.result.min_move_gain, dq);
    if (static_cast<double>(ctx_.k) > ctx_.move_cap) {
      throw std::logic_error("move count exceeds 2 W^2");
    }
  }

 private:
  RunContext& ctx_;
  double q_before_ = 0.0;
};

void audit_structures(const RunContext& ctx, const CommunityState& st, const MoveTracker* tr) {
  if (!ctx.opt.audit) return;
  st.audit();
  if (tr) tr->audit(st);
}

MoveRecord make_record(const RunContext& ctx, std::size_t level, std::size_t list_size,
                       std::int64_t t, std::uint64_t calls, double delta) {
  MoveRecord r;
  r.level = level;
  r.k = ctx.k;
  r.algorithm = ctx.result.algorithm;
  r.list_size = list_size;
  r.t = t;
  r.classical_calls = calls;
  r.delta = delta;
  return r;
}

void set_estimate(MoveRecord& r, Variant v, double x) {
  r.estimates[static_cast<std::size_t>(v)] = x;
}

std::vector<CommunityId> to_vector(std::span<const CommunityId> s) {
  return {s.begin(), s.end()};
}

template <class Phase>
RunResult run_levels(const Graph& g, Algorithm algo, std::uint64_t seed, const SimOptions& opt,
                     Phase&& phase) {
  const std::size_t n = g.num_vertices();
  if (n < 2) throw std::invalid_argument("graph needs at least two vertices");
  RunResult res;
  res.algorithm = algo;
  res.seed = seed;
  res.ledger = QueryLedger(opt.keep_records);
  res.move_budget = move_budget(n, opt.params);
  RunContext ctx{opt,
                 res,
                 Deadline(opt.timeout),
                 make_stream(seed, stream::order),
                 make_stream(seed, stream::simulation),
                 epsilon_budget(n, opt.params),
                 0,
                 max_moves_bound(g)};

  std::vector<VertexId> mapping(n);
  std::iota(mapping.begin(), mapping.end(), VertexId{0});
  std::optional<Graph> coarse;
  const Graph* level_graph = &g;
  for (std::size_t level = 0;; ++level) {
    LevelOutcome out = phase(*level_graph, level, ctx);
    res.levels = level + 1;
    res.moves += out.moves;
    res.gain_evaluations += out.gain_evaluations;
    res.peak_memory_bytes = std::max(res.peak_memory_bytes, out.memory_bytes);
    if (out.moves > 0) {
      Aggregation agg = aggregate(*level_graph, out.labels);
      for (auto& m : mapping) m = agg.coarse_vertex[m];
      coarse = std::move(agg.graph);
      level_graph = &*coarse;
    }
    if (out.timed_out) {
      res.timed_out = true;
      break;
    }
    if (out.moves == 0) break;
  }
  res.modularity = modularity(g, mapping);
  res.partition = std::move(mapping);
  res.budget_exceeded = static_cast<double>(res.moves) > res.move_budget;
  return res;
}

// ---- original Louvain -----------------------------------------------------

LevelOutcome ol_level_cached(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  CommunityState st(g);
  MoveAudit audit(ctx);
  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::uint64_t mark = 0;
  for (;;) {
    shuffle(std::span(order), ctx.order_rng);
    std::uint64_t pass_moves = 0;
    for (VertexId u : order) {
      if (ctx.deadline.expired()) {
        out.timed_out = true;
        break;
      }
      const MoveDelta best = st.best_move(u);
      if (!(best.gain > 0.0)) continue;
      audit.before([&] { return st.modularity(); });
      st.apply_move(u, *best.target);
      ++ctx.k;
      audit.after([&] { return st.modularity(); }, best.gain);
      audit_structures(ctx, st, nullptr);
      ctx.record(make_record(ctx, level, order.size(), -1, st.gain_evaluations() - mark,
                             best.gain));
      mark = st.gain_evaluations();
      ++pass_moves;
    }
    out.moves += pass_moves;
    if (pass_moves == 0 || out.timed_out) break;
  }
  ctx.record(make_record(ctx, level, order.size(), -1, st.gain_evaluations() - mark, kNoEstimate));
  out.memory_bytes = st.memory_bytes() + order.capacity() * sizeof(VertexId);
  out.gain_evaluations = st.gain_evaluations();
  out.labels = to_vector(st.labels());
  return out;
}

// Same sweep without community adjacency lists: each visit regroups the
// neighbourhood by community in scratch arrays.
LevelOutcome ol_level_uncached(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  const std::size_t n = g.num_vertices();
  const double w = g.total_weight();
  std::vector<CommunityId> labels(n);
  std::iota(labels.begin(), labels.end(), CommunityId{0});
  std::vector<double> sigma(n);
  for (VertexId u = 0; u < n; ++u) sigma[u] = g.strength(u);
  std::vector<double> weight_to(n, 0.0);
  std::vector<CommunityId> touched;
  touched.reserve(g.max_degree());
  MoveAudit audit(ctx);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::uint64_t calls = 0;
  std::uint64_t mark = 0;
  for (;;) {
    shuffle(std::span(order), ctx.order_rng);
    std::uint64_t pass_moves = 0;
    for (VertexId u : order) {
      if (ctx.deadline.expired()) {
        out.timed_out = true;
        break;
      }
      touched.clear();
      for (const Neighbor& nb : g.neighbors(u)) {
        const CommunityId c = labels[nb.id];
        if (weight_to[c] == 0.0) touched.push_back(c);
        weight_to[c] += nb.weight;
      }
      std::sort(touched.begin(), touched.end());
      const CommunityId own = labels[u];
      const double s_u = g.strength(u);
      const double s_own = weight_to[own];
      std::optional<CommunityId> target;
      double best = 0.0;
      for (CommunityId c : touched) {
        ++calls;
        const double gain =
            c == own ? 0.0 : modularity_gain(s_u, sigma[own], sigma[c], weight_to[c], s_own, w);
        if (!target || gain > best) {
          target = c;
          best = gain;
        }
      }
      for (CommunityId c : touched) weight_to[c] = 0.0;
      if (!(best > 0.0)) continue;
      audit.before([&] { return modularity(g, labels); });
      sigma[own] -= s_u;
      sigma[*target] += s_u;
      labels[u] = *target;
      ++ctx.k;
      audit.after([&] { return modularity(g, labels); }, best);
      ctx.record(make_record(ctx, level, n, -1, calls - mark, best));
      mark = calls;
      ++pass_moves;
    }
    out.moves += pass_moves;
    if (pass_moves == 0 || out.timed_out) break;
  }
  ctx.record(make_record(ctx, level, n, -1, calls - mark, kNoEstimate));
  out.memory_bytes = labels.capacity() * sizeof(CommunityId) +
                     (sigma.capacity() + weight_to.capacity()) * sizeof(double) +
                     touched.capacity() * sizeof(CommunityId) +
                     order.capacity() * sizeof(VertexId);
  out.gain_evaluations = calls;
  out.labels = std::move(labels);
  return out;
}

// ---- sampling with replacement --------------------------------------------

LevelOutcome olr_level(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  const std::size_t n = g.num_vertices();
  CommunityState st(g);
  MoveTracker tr(st, {true, ctx.opt.audit});
  MoveAudit audit(ctx);
  std::uint64_t mark = 0;
  std::uint64_t draws = 0;
  while (!tr.marked_vertices().empty()) {
    if (ctx.deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const auto u = static_cast<VertexId>(uniform_index(ctx.order_rng, n));
    ++draws;
    if (!st.is_good(u)) continue;
    const std::int64_t t = static_cast<std::int64_t>(tr.marked_vertices().size());
    const MoveDelta best = st.best_move(u);
    const CommunityId from = st.label(u);
    audit.before([&] { return st.modularity(); });
    st.apply_move(u, *best.target);
    tr.update_after_move(st, u, from, *best.target);
    ++ctx.k;
    audit.after([&] { return st.modularity(); }, best.gain);
    audit_structures(ctx, st, &tr);
    MoveRecord r = make_record(ctx, level, n, t, st.gain_evaluations() - mark, best.gain);
    r.draws = draws;
    ctx.record(r);
    mark = st.gain_evaluations();
    draws = 0;
    ++out.moves;
  }
  if (!out.timed_out) {
    // The classical algorithm cannot see t; it stops after one full sweep
    // that finds nothing.
    for (VertexId u = 0; u < n; ++u) st.is_good(u);
  }
  ctx.record(make_record(ctx, level, n, 0, st.gain_evaluations() - mark, kNoEstimate));
  out.memory_bytes = st.memory_bytes();
  out.gain_evaluations = st.gain_evaluations();
  out.labels = to_vector(st.labels());
  return out;
}

// ---- shared pieces of the quantum variants -------------------------------

// Draws the classical samples of one search and returns the marked item
// they hit, if any. `marked` tells membership of an index in [0, L).
template <class Marked>
std::optional<std::size_t> classical_draws(NsamplesPolicy& policy, const RunContext& ctx,
                                           Rng& rng, std::size_t L, std::size_t t,
                                           Marked&& marked) {
  if (L == 0) return std::nullopt;
  if (ctx.opt.deterministic_nsamples) {
    policy.observe_fraction(t, L);
    return std::nullopt;
  }
  const std::size_t draws = policy.current();
  for (std::size_t i = 0; i < draws; ++i) {
    const std::size_t x = uniform_index(rng, L);
    const bool hit = marked(x);
    policy.record_draw(hit);
    if (hit) return x;
  }
  return std::nullopt;
}

class QlOracle final : public SegmentOracle {
 public:
  QlOracle(const CommunityState& st, const MoveTracker& tr, NsamplesPolicy& policy,
           RunContext& ctx)
      : st_(st), tr_(tr), policy_(policy), ctx_(ctx) {}

  void set_list(std::span<const VertexId> list) { list_ = list; }

  bool marked(std::size_t i) const override {
    return tr_.marked_vertices().contains(list_[i]);
  }

  double ql_check_cost(std::size_t i, double zeta, std::size_t segment_length) override {
    const std::size_t d = st_.neighbor_communities(list_[i]);
    if (d == 0) return 0.0;
    return w_zalka(static_cast<double>(d), zeta / static_cast<double>(segment_length),
                   ctx_.opt.params);
  }

  double qlsg_check_cost(std::size_t i) override {
    return static_cast<double>(st_.good_scan_cost(list_[i]));
  }

  VertexFindCharge vertexfind(std::size_t begin, std::size_t end, std::size_t t,
                              double zeta) override {
    const std::size_t L = end - begin;
    const auto N = static_cast<double>(policy_.current());
    const auto dmax = static_cast<double>(st_.delta_max());
    const auto& p = ctx_.opt.params;
    VertexFindCharge c;
    c.ql = e_vertexfind(static_cast<double>(L), static_cast<double>(t), N, zeta, dmax, p);
    c.qlsg = e_vertexfind_sg(static_cast<double>(L), static_cast<double>(t), N, zeta, dmax, p);
    auto hit = classical_draws(policy_, ctx_, ctx_.sim_rng, L, t,
                               [&](std::size_t x) { return marked(begin + x); });
    if (hit) {
      c.found = begin + *hit;
    } else if (t > 0) {
      std::size_t pick = uniform_index(ctx_.sim_rng, t);
      for (std::size_t i = begin; i < end; ++i) {
        if (marked(i) && pick-- == 0) {
          c.found = i;
          break;
        }
      }
    }
    return c;
  }

 private:
  const CommunityState& st_;
  const MoveTracker& tr_;
  NsamplesPolicy& policy_;
  RunContext& ctx_;
  std::span<const VertexId> list_;
};

// ---- QLouvain -------------------------------------------------------------

// Runs the original sweep and, for every move, simulates FindFirst over the
// part of the shuffled list not yet visited since the previous move.
LevelOutcome ql_level(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  const std::size_t n = g.num_vertices();
  CommunityState st(g);
  MoveTracker tr(st, {true, ctx.opt.audit});
  NsamplesPolicy policy(ctx.opt.params.nsamples_init);
  QlOracle oracle(st, tr, policy, ctx);
  MoveAudit audit(ctx);
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::uint64_t mark = 0;

  auto find_first = [&](std::size_t from) {
    const std::size_t len = n - from;
    oracle.set_list(std::span<const VertexId>(order).subspan(from));
    return simulate_find_first(oracle, len, findfirst_zeta(ctx.eps, len),
                               ctx.opt.params.lswitch);
  };

  for (;;) {
    shuffle(std::span(order), ctx.order_rng);
    std::uint64_t pass_moves = 0;
    std::size_t from = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (ctx.deadline.expired()) {
        out.timed_out = true;
        break;
      }
      const VertexId u = order[i];
      const MoveDelta best = st.best_move(u);
      if (!(best.gain > 0.0)) continue;
      const std::int64_t t = static_cast<std::int64_t>(tr.marked_vertices().size());
      const FindFirstResult ff = find_first(from);
      if (!ff.found || *ff.found != i - from) {
        throw std::logic_error("FindFirst simulation disagrees with the sweep");
      }
      const MaxFindCost mf = maxfind_cost(st.neighbor_communities(u), ctx.eps, ctx.opt.params);
      const CommunityId prev = st.label(u);
      audit.before([&] { return st.modularity(); });
      st.apply_move(u, *best.target);
      tr.update_after_move(st, u, prev, *best.target);
      ++ctx.k;
      audit.after([&] { return st.modularity(); }, best.gain);
      audit_structures(ctx, st, &tr);
      MoveRecord r = make_record(ctx, level, n - from, t, st.gain_evaluations() - mark, best.gain);
      set_estimate(r, Variant::ql, ff.ql + mf.queries);
      set_estimate(r, Variant::qlsg, ff.qlsg + mf.queries);
      ctx.record(r);
      mark = st.gain_evaluations();
      from = i + 1;
      ++pass_moves;
    }
    if (out.timed_out) break;
    if (from < n) {
      // The rest of the pass holds no good vertex; FindFirst has to fail
      // over it before the list is reshuffled.
      const FindFirstResult ff = find_first(from);
      if (ff.found) throw std::logic_error("FindFirst found a vertex the sweep skipped");
      MoveRecord r = make_record(ctx, level, n - from,
                                 static_cast<std::int64_t>(tr.marked_vertices().size()),
                                 st.gain_evaluations() - mark, kNoEstimate);
      set_estimate(r, Variant::ql, ff.ql);
      set_estimate(r, Variant::qlsg, ff.qlsg);
      ctx.record(r);
      mark = st.gain_evaluations();
    }
    out.moves += pass_moves;
    if (pass_moves == 0) break;
  }
  if (mark != st.gain_evaluations()) {
    ctx.record(make_record(ctx, level, n, -1, st.gain_evaluations() - mark, kNoEstimate));
  }
  out.memory_bytes = st.memory_bytes();
  out.gain_evaluations = st.gain_evaluations();
  out.labels = to_vector(st.labels());
  return out;
}

// ---- SimpleQLouvain -------------------------------------------------------

LevelOutcome sql_level(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  const std::size_t n = g.num_vertices();
  const auto& p = ctx.opt.params;
  CommunityState st(g);
  MoveTracker tr(st, {true, ctx.opt.audit});
  NsamplesPolicy policy(p.nsamples_init);
  MoveAudit audit(ctx);
  for (;;) {
    if (ctx.deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const std::size_t t = tr.marked_vertices().size();
    const auto N = static_cast<double>(policy.current());
    const auto dmax = static_cast<double>(st.delta_max());
    const double L = static_cast<double>(n);
    const double sql = e_vertexfind(L, static_cast<double>(t), N, ctx.eps, dmax, p);
    const double sqlsg = e_vertexfind_sg(L, static_cast<double>(t), N, ctx.eps, dmax, p);
    if (t == 0) {
      MoveRecord r = make_record(ctx, level, n, 0, 0, kNoEstimate);
      set_estimate(r, Variant::sql, sql);
      set_estimate(r, Variant::sqlsg, sqlsg);
      ctx.record(r);
      break;
    }
    auto hit = classical_draws(policy, ctx, ctx.order_rng, n, t, [&](std::size_t x) {
      return tr.marked_vertices().contains(x);
    });
    const auto u = static_cast<VertexId>(hit ? *hit : tr.sample_marked(ctx.order_rng));
    const std::uint64_t before = st.gain_evaluations();
    const MoveDelta best = st.best_move(u);
    const MaxFindCost mf = maxfind_cost(st.neighbor_communities(u), ctx.eps, p);
    const CommunityId prev = st.label(u);
    audit.before([&] { return st.modularity(); });
    st.apply_move(u, *best.target);
    tr.update_after_move(st, u, prev, *best.target);
    ++ctx.k;
    audit.after([&] { return st.modularity(); }, best.gain);
    audit_structures(ctx, st, &tr);
    MoveRecord r = make_record(ctx, level, n, static_cast<std::int64_t>(t),
                               st.gain_evaluations() - before, best.gain);
    set_estimate(r, Variant::sql, sql + mf.queries);
    set_estimate(r, Variant::sqlsg, sqlsg + mf.queries);
    ctx.record(r);
    ++out.moves;
  }
  out.memory_bytes = st.memory_bytes();
  out.gain_evaluations = st.gain_evaluations();
  out.labels = to_vector(st.labels());
  return out;
}

// ---- EdgeQLouvain ---------------------------------------------------------

LevelOutcome eql_level(const Graph& g, std::size_t level, RunContext& ctx) {
  LevelOutcome out;
  const auto& p = ctx.opt.params;
  const std::size_t L = g.num_directed_edges();
  CommunityState st(g);
  MoveTracker tr(st, {ctx.opt.audit, true});
  NsamplesPolicy policy(p.nsamples_init);
  MoveAudit audit(ctx);
  for (;;) {
    if (ctx.deadline.expired()) {
      out.timed_out = true;
      break;
    }
    const std::size_t t = tr.marked_edges().size();
    const double est =
        L == 0 ? 0.0
               : e_qsearch(static_cast<double>(L), static_cast<double>(t),
                           static_cast<double>(policy.current()), ctx.eps, p);
    if (t == 0) {
      MoveRecord r = make_record(ctx, level, L, 0, 0, kNoEstimate);
      set_estimate(r, Variant::eql, est);
      ctx.record(r);
      break;
    }
    auto hit = classical_draws(policy, ctx, ctx.order_rng, L, t, [&](std::size_t e) {
      return tr.marked_edges().contains(e);
    });
    const std::size_t e = hit ? *hit : tr.sample_marked_edge(ctx.order_rng);
    const VertexId u = g.edge_source(e);
    const std::uint64_t before = st.gain_evaluations();
    const MoveDelta best = st.best_move(u);
    const MaxFindCost mf = maxfind_cost(st.neighbor_communities(u), ctx.eps, p);
    const CommunityId prev = st.label(u);
    audit.before([&] { return st.modularity(); });
    st.apply_move(u, *best.target);
    tr.update_after_move(st, u, prev, *best.target);
    ++ctx.k;
    audit.after([&] { return st.modularity(); }, best.gain);
    audit_structures(ctx, st, &tr);
    MoveRecord r = make_record(ctx, level, L, static_cast<std::int64_t>(t),
                               st.gain_evaluations() - before, best.gain);
    set_estimate(r, Variant::eql, est + mf.queries);
    ctx.record(r);
    ++out.moves;
  }
  out.memory_bytes = st.memory_bytes();
  out.gain_evaluations = st.gain_evaluations();
  out.labels = to_vector(st.labels());
  return out;
}

}  // namespace

RunResult run_ol(const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  if (opt.use_cache) return run_levels(g, Algorithm::ol, seed, opt, ol_level_cached);
  return run_levels(g, Algorithm::ol, seed, opt, ol_level_uncached);
}

RunResult run_ol_replacement(const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  return run_levels(g, Algorithm::ol_replace, seed, opt, olr_level);
}

RunResult run_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  return run_levels(g, Algorithm::ql, seed, opt, ql_level);
}

RunResult run_simple_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  return run_levels(g, Algorithm::sql, seed, opt, sql_level);
}

RunResult run_edge_qlouvain(const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  return run_levels(g, Algorithm::eql, seed, opt, eql_level);
}

RunResult run_algorithm(Algorithm a, const Graph& g, std::uint64_t seed, const SimOptions& opt) {
  switch (a) {
    case Algorithm::ol: return run_ol(g, seed, opt);
    case Algorithm::ol_replace: return run_ol_replacement(g, seed, opt);
    case Algorithm::ql: return run_qlouvain(g, seed, opt);
    case Algorithm::sql: return run_simple_qlouvain(g, seed, opt);
    case Algorithm::eql: return run_edge_qlouvain(g, seed, opt);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace qlouvain
