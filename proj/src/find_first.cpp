// qlouvain - find_first.cpp
#include <algorithm>

#include "qlouvain/sim.hpp"

namespace qlouvain {

namespace {

class FindFirstRun {
 public:
  FindFirstRun(SegmentOracle& oracle, double zeta, std::size_t lswitch)
      : oracle_(oracle), zeta_(zeta), lswitch_(lswitch) {}

  FindFirstResult run(std::size_t length) {
    for (std::size_t l = 0; l < length;) {
      const std::size_t r = std::min(length - 1, l == 0 ? 0 : 2 * l - 1);
      const Outcome hit = search(l, r);
      if (hit.exact) {
        result_.found = hit.index;
        return result_;
      }
      if (hit.index) {
        result_.found = bisect(l, *hit.index);
        return result_;
      }
      l = r + 1;
    }
    return result_;
  }

 private:
  struct Outcome {
    std::optional<std::size_t> index;
    bool exact = false;  // index is the first marked item of the segment
  };

  bool check(std::size_t i, std::size_t segment_length) {
    result_.ql += oracle_.ql_check_cost(i, zeta_, segment_length);
    result_.qlsg += oracle_.qlsg_check_cost(i);
    ++result_.classical_checks;
    return oracle_.marked(i);
  }

  // One search over [l, r].
  Outcome search(std::size_t l, std::size_t r) {
    const std::size_t len = r - l + 1;
    if (len < lswitch_) {
      for (std::size_t i = l; i <= r; ++i) {
        if (check(i, len)) return {i, true};
      }
      return {};
    }
    std::size_t t = 0;
    for (std::size_t i = l; i <= r; ++i) t += oracle_.marked(i) ? 1 : 0;
    const VertexFindCharge c = oracle_.vertexfind(l, r + 1, t, zeta_);
    result_.ql += c.ql;
    result_.qlsg += c.qlsg;
    ++result_.vertexfind_calls;
    return {t > 0 ? c.found : std::nullopt, false};
  }

  // [l, r] holds a marked item at r and none before l.
  std::size_t bisect(std::size_t l, std::size_t r) {
    while (l < r) {
      const std::size_t half = (r - l + 1) / 2;
      if (half == 1) {
        if (check(l, 1)) return l;
        ++l;
        continue;
      }
      const std::size_t c = l + half - 1;
      const Outcome hit = search(l, c);
      if (hit.exact) return *hit.index;
      if (hit.index) {
        r = *hit.index;
      } else {
        l = c + 1;
      }
    }
    return l;
  }

  SegmentOracle& oracle_;
  double zeta_;
  std::size_t lswitch_;
  FindFirstResult result_;
};

}  // namespace

FindFirstResult simulate_find_first(SegmentOracle& oracle, std::size_t length, double zeta,
                                    std::size_t lswitch) {
  return FindFirstRun(oracle, zeta, lswitch).run(length);
}

}  // namespace qlouvain
