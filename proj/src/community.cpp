// qlouvain - community.cpp
#include "qlouvain/community.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace qlouvain {

namespace {

// First entry with community >= c. Short lists are scanned linearly.
template <class It>
It find_entry(It first, It last, CommunityId c) {
  if (last - first <= 16) {
    while (first != last && first->community < c) ++first;
    return first;
  }
  return std::lower_bound(first, last, c,
                          [](const CommunityWeight& a, CommunityId id) { return a.community < id; });
}

auto find_entry(std::span<const CommunityWeight> list, CommunityId c) {
  return find_entry(list.begin(), list.end(), c);
}

bool close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double modularity(const Graph& g, std::span<const CommunityId> labels) {
  const std::size_t n = g.num_vertices();
  if (labels.size() != n) throw std::invalid_argument("modularity: label count mismatch");
  const double w = g.total_weight();
  if (n == 0 || w == 0.0) return 0.0;
  const CommunityId max_label = *std::max_element(labels.begin(), labels.end());
  std::vector<double> inside(static_cast<std::size_t>(max_label) + 1, 0.0);
  std::vector<double> total(inside.size(), 0.0);
  for (VertexId u = 0; u < n; ++u) {
    const CommunityId c = labels[u];
    total[c] += g.strength(u);
    inside[c] += g.self_weight(u);
    for (const Neighbor& nb : g.neighbors(u)) {
      if (labels[nb.id] == c) inside[c] += nb.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < inside.size(); ++c) {
    const double frac = total[c] / (2.0 * w);
    q += inside[c] / (2.0 * w) - frac * frac;
  }
  return q;
}

CommunityState::CommunityState(const Graph& g) : graph_(&g) {
  const std::size_t n = g.num_vertices();
  labels_.resize(n);
  sigma_.resize(n);
  entries_.resize(g.num_directed_edges());
  eta_size_.resize(n);
  own_.assign(n, 0.0);
  size_histogram_.assign(g.max_degree() + 1, 0);
  for (VertexId u = 0; u < n; ++u) {
    labels_[u] = u;
    sigma_[u] = g.strength(u);
    CommunityWeight* out = slot_begin(u);
    for (const Neighbor& nb : g.neighbors(u)) *out++ = {nb.id, 1, nb.weight};
    eta_size_[u] = static_cast<std::uint32_t>(g.degree(u));
    ++size_histogram_[g.degree(u)];
  }
  delta_max_ = g.max_degree();
}

double CommunityState::gain_from(VertexId u, CommunityId alpha, double s_alpha) const {
  return modularity_gain(graph_->strength(u), sigma_[labels_[u]], sigma_[alpha], s_alpha,
                         own_[u], graph_->total_weight());
}

double CommunityState::gain(VertexId u, CommunityId alpha) const {
  if (alpha == labels_[u]) return 0.0;
  const auto list = eta(u);
  auto it = find_entry(list, alpha);
  if (it == list.end() || it->community != alpha) {
    throw std::invalid_argument("community " + std::to_string(alpha) +
                                " is not adjacent to vertex " + std::to_string(u));
  }
  return gain_from(u, alpha, it->weight);
}

MoveDelta CommunityState::delta(VertexId u, CommunityId alpha) {
  const double g = gain(u, alpha);
  ++gain_evaluations_;
  return {u, alpha, g};
}

MoveDelta CommunityState::best_move(VertexId u) {
  MoveDelta best{u, std::nullopt, 0.0};
  const CommunityId own = labels_[u];
  const double s_u = graph_->strength(u);
  const double sigma_own = sigma_[own];
  const double s_own = own_[u];
  const double w = graph_->total_weight();
  const auto list = eta(u);
  gain_evaluations_ += list.size();
  for (const CommunityWeight& e : list) {
    const double g =
        e.community == own ? 0.0
                           : modularity_gain(s_u, sigma_own, sigma_[e.community], e.weight, s_own, w);
    if (!best.target || g > best.gain) {
      best.target = e.community;
      best.gain = g;
    }
  }
  return best;
}

bool CommunityState::is_good(VertexId u) {
  const CommunityId own = labels_[u];
  for (const CommunityWeight& e : eta(u)) {
    ++gain_evaluations_;
    if (e.community != own && gain_from(u, e.community, e.weight) > 0.0) return true;
  }
  return false;
}

bool CommunityState::has_good_move(VertexId u) const {
  const CommunityId own = labels_[u];
  for (const CommunityWeight& e : eta(u)) {
    if (e.community != own && gain_from(u, e.community, e.weight) > 0.0) return true;
  }
  return false;
}

std::size_t CommunityState::good_scan_cost(VertexId u) const {
  const CommunityId own = labels_[u];
  std::size_t calls = 0;
  for (const CommunityWeight& e : eta(u)) {
    ++calls;
    if (e.community != own && gain_from(u, e.community, e.weight) > 0.0) break;
  }
  return calls;
}

void CommunityState::good_targets(VertexId u, std::vector<CommunityId>& out) const {
  const CommunityId own = labels_[u];
  for (const CommunityWeight& e : eta(u)) {
    if (e.community != own && gain_from(u, e.community, e.weight) > 0.0) {
      out.push_back(e.community);
    }
  }
}

void CommunityState::resize_tracked(std::size_t old_size, std::size_t new_size) {
  --size_histogram_[old_size];
  ++size_histogram_[new_size];
  if (new_size > delta_max_) delta_max_ = new_size;
  while (delta_max_ > 0 && size_histogram_[delta_max_] == 0) --delta_max_;
}

double CommunityState::add_weight(VertexId v, CommunityId c, double w) {
  CommunityWeight* first = slot_begin(v);
  CommunityWeight* last = first + eta_size_[v];
  CommunityWeight* it = find_entry(first, last, c);
  if (it != last && it->community == c) {
    it->weight += w;
    ++it->edges;
    return it->weight;
  }
  if (eta_size_[v] == graph_->degree(v)) {
    throw std::logic_error("community adjacency list out of sync");
  }
  for (CommunityWeight* p = last; p != it; --p) *p = *(p - 1);
  *it = {c, 1, w};
  ++eta_size_[v];
  resize_tracked(eta_size_[v] - 1, eta_size_[v]);
  return w;
}

double CommunityState::remove_weight(VertexId v, CommunityId c, double w) {
  CommunityWeight* first = slot_begin(v);
  CommunityWeight* last = first + eta_size_[v];
  CommunityWeight* it = find_entry(first, last, c);
  if (it == last || it->community != c) {
    throw std::logic_error("community adjacency list out of sync");
  }
  if (--it->edges == 0) {
    for (CommunityWeight* p = it + 1; p != last; ++p) *(p - 1) = *p;
    --eta_size_[v];
    resize_tracked(eta_size_[v] + 1, eta_size_[v]);
    return 0.0;
  }
  it->weight -= w;
  return it->weight;
}

void CommunityState::refresh_own(VertexId v) {
  const auto list = eta(v);
  auto it = find_entry(list, labels_[v]);
  own_[v] = (it != list.end() && it->community == labels_[v]) ? it->weight : 0.0;
}

void CommunityState::apply_move(VertexId u, CommunityId beta) {
  const CommunityId alpha = labels_[u];
  if (beta == alpha) {
    throw std::invalid_argument("apply_move: vertex " + std::to_string(u) +
                                " already in community " + std::to_string(beta));
  }
  {
    const auto list = eta(u);
    auto it = find_entry(list, beta);
    if (it == list.end() || it->community != beta) {
      throw std::invalid_argument("apply_move: community " + std::to_string(beta) +
                                  " is not adjacent to vertex " + std::to_string(u));
    }
  }
  const double s_u = graph_->strength(u);
  sigma_[alpha] -= s_u;
  sigma_[beta] += s_u;
  labels_[u] = beta;
  for (const Neighbor& nb : graph_->neighbors(u)) {
    const double left = remove_weight(nb.id, alpha, nb.weight);
    const double joined = add_weight(nb.id, beta, nb.weight);
    const CommunityId lv = labels_[nb.id];
    if (lv == alpha) own_[nb.id] = left;
    else if (lv == beta) own_[nb.id] = joined;
  }
  refresh_own(u);
}

double CommunityState::modularity() const { return qlouvain::modularity(*graph_, labels_); }

std::size_t CommunityState::memory_bytes() const {
  std::size_t bytes = labels_.capacity() * sizeof(CommunityId) +
                      sigma_.capacity() * sizeof(double) + own_.capacity() * sizeof(double) +
                      size_histogram_.capacity() * sizeof(std::uint32_t) +
                      eta_size_.capacity() * sizeof(std::uint32_t) +
                      entries_.capacity() * sizeof(CommunityWeight);
  return bytes;
}

void CommunityState::audit(double tolerance) const {
  const Graph& g = *graph_;
  const std::size_t n = g.num_vertices();
  auto fail = [](const std::string& msg) { throw std::logic_error("community audit: " + msg); };

  std::vector<double> sigma(n, 0.0);
  for (VertexId u = 0; u < n; ++u) sigma[labels_[u]] += g.strength(u);
  double sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (!close(sigma[c], sigma_[c], tolerance)) fail("sigma of community " + std::to_string(c));
    sum += sigma_[c];
  }
  if (!close(sum, 2.0 * g.total_weight(), tolerance)) fail("sigma total differs from 2W");

  std::size_t largest = 0;
  for (VertexId u = 0; u < n; ++u) {
    std::map<CommunityId, std::pair<double, std::uint32_t>> expect;
    for (const Neighbor& nb : g.neighbors(u)) {
      auto& slot = expect[labels_[nb.id]];
      slot.first += nb.weight;
      ++slot.second;
    }
    const auto list = eta(u);
    if (list.size() != expect.size()) fail("eta size of vertex " + std::to_string(u));
    if (list.size() > g.degree(u)) fail("eta larger than degree at vertex " + std::to_string(u));
    double total = 0.0;
    std::size_t i = 0;
    for (const auto& [c, slot] : expect) {
      const CommunityWeight& e = list[i++];
      if (e.community != c || e.edges != slot.second || !close(e.weight, slot.first, tolerance)) {
        fail("eta entry of vertex " + std::to_string(u));
      }
      total += e.weight;
    }
    if (!close(total + g.self_weight(u), g.strength(u), tolerance)) {
      fail("eta weights of vertex " + std::to_string(u) + " do not sum to its strength");
    }
    auto own = expect.find(labels_[u]);
    const double own_expected = own == expect.end() ? 0.0 : own->second.first;
    if (!close(own_[u], own_expected, tolerance)) fail("own weight of vertex " + std::to_string(u));
    largest = std::max(largest, list.size());
  }
  if (largest != delta_max_) fail("delta_max is stale");
}

}  // namespace qlouvain
