// qlouvain - fcs.cpp
// Fixed-community-size benchmark graphs: vertices are cut into consecutive
// blocks of S, each edge picks a block uniformly, one endpoint inside it and
// the other inside (probability 1 - mu) or outside (probability mu).
#include <cmath>
#include <unordered_set>

#include "qlouvain/graph.hpp"
#include "qlouvain/rng.hpp"
#include "text.hpp"

namespace qlouvain {

namespace {

std::size_t pairs(std::size_t k) { return k < 2 ? 0 : k * (k - 1) / 2; }

std::size_t block_count(const FcsConfig& cfg) {
  return (cfg.n + cfg.community_size - 1) / cfg.community_size;
}

std::size_t intra_pairs(const FcsConfig& cfg) {
  const std::size_t full = cfg.n / cfg.community_size;
  return full * pairs(cfg.community_size) + pairs(cfg.n % cfg.community_size);
}

[[noreturn]] void infeasible(const std::string& msg) {
  throw GraphError(GraphErrorKind::infeasible, "infeasible FCS configuration: " + msg);
}

}  // namespace

std::size_t fcs_edge_count(const FcsConfig& cfg) {
  return static_cast<std::size_t>(std::ceil(cfg.avg_degree * static_cast<double>(cfg.n)));
}

void validate(const FcsConfig& cfg) {
  auto bad = [](const std::string& msg) {
    throw GraphError(GraphErrorKind::invalid_argument, "invalid FCS configuration: " + msg);
  };
  if (cfg.n < 2) bad("n must be at least 2");
  if (cfg.community_size < 1) bad("community size must be positive");
  if (cfg.community_size > cfg.n) bad("community size exceeds n");
  if (!(cfg.mu >= 0.0 && cfg.mu <= 1.0)) bad("mu must lie in [0, 1]");
  if (!(cfg.avg_degree > 0.0) || !std::isfinite(cfg.avg_degree)) bad("average degree must be positive");

  const std::size_t k = fcs_edge_count(cfg);
  const std::size_t all = pairs(cfg.n);
  const std::size_t intra = intra_pairs(cfg);
  if (k > all) {
    infeasible(std::to_string(k) + " edges requested but only " + std::to_string(all) +
               " vertex pairs exist");
  }
  if (cfg.mu == 0.0 && k > intra) {
    infeasible(std::to_string(k) + " intra-community edges requested but only " +
               std::to_string(intra) + " intra-community pairs exist");
  }
  if (cfg.mu == 1.0 && k > all - intra) {
    infeasible(std::to_string(k) + " inter-community edges requested but only " +
               std::to_string(all - intra) + " inter-community pairs exist");
  }
}

std::vector<CommunityId> fcs_blocks(const FcsConfig& cfg) {
  std::vector<CommunityId> blocks(cfg.n);
  for (std::size_t u = 0; u < cfg.n; ++u) {
    blocks[u] = static_cast<CommunityId>(u / cfg.community_size);
  }
  return blocks;
}

std::string fcs_header(const FcsConfig& cfg) {
  return "# fcs n=" + std::to_string(cfg.n) + " d=" + text::format_double(cfg.avg_degree) +
         " S=" + std::to_string(cfg.community_size) + " mu=" + text::format_double(cfg.mu) +
         " seed=" + std::to_string(cfg.seed);
}

Graph generate_fcs(const FcsConfig& cfg) {
  validate(cfg);
  const std::size_t k = fcs_edge_count(cfg);
  const std::size_t blocks = block_count(cfg);
  const std::size_t max_rejections = 100 * k;
  Rng rng = make_stream(cfg.seed, stream::generator);

  std::vector<Edge> edges;
  edges.reserve(k);
  std::unordered_set<std::uint64_t> present;
  present.reserve(2 * k);
  std::size_t rejections = 0;
  while (edges.size() < k) {
    const std::size_t l = uniform_index(rng, blocks);
    const std::size_t start = l * cfg.community_size;
    const std::size_t size = std::min(cfg.community_size, cfg.n - start);
    const std::size_t u = start + uniform_index(rng, size);
    std::size_t v = 0;
    bool usable = true;
    if (!bernoulli(rng, cfg.mu)) {
      v = start + uniform_index(rng, size);
    } else if (cfg.n > size) {
      const std::size_t r = uniform_index(rng, cfg.n - size);
      v = r < start ? r : r + size;
    } else {
      usable = false;
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
    if (!usable || u == v || !present.insert(key).second) {
      if (++rejections > max_rejections) {
        infeasible("gave up after " + std::to_string(rejections) + " rejected draws with " +
                   std::to_string(edges.size()) + " of " + std::to_string(k) + " edges placed");
      }
      continue;
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), 1.0});
  }
  return Graph::from_edges(cfg.n, edges);
}

}  // namespace qlouvain
