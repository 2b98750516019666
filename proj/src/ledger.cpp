// qlouvain - ledger.cpp
#include <algorithm>
#include <cmath>
#include <ostream>

#include "qlouvain/sim.hpp"
#include "text.hpp"

namespace qlouvain {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ol: return "ol";
    case Algorithm::ol_replace: return "ol-replace";
    case Algorithm::ql: return "ql";
    case Algorithm::sql: return "sql";
    case Algorithm::eql: return "eql";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::ol, Algorithm::ol_replace, Algorithm::ql, Algorithm::sql,
                      Algorithm::eql}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::ql: return "QL";
    case Variant::qlsg: return "QLSG";
    case Variant::sql: return "SQL";
    case Variant::sqlsg: return "SQLSG";
    case Variant::eql: return "EQL";
  }
  return "?";
}

std::vector<Variant> variants_of(Algorithm a) {
  switch (a) {
    case Algorithm::ql: return {Variant::ql, Variant::qlsg};
    case Algorithm::sql: return {Variant::sql, Variant::sqlsg};
    case Algorithm::eql: return {Variant::eql};
    default: return {};
  }
}

void QueryLedger::add(const MoveRecord& r) {
  classical_calls_ += r.classical_calls;
  for (std::size_t i = 0; i < kVariantCount; ++i) {
    if (std::isnan(r.estimates[i])) continue;
    totals_[i] += r.estimates[i];
    seen_[i] = true;
    min_estimate_ = std::min(min_estimate_, r.estimates[i]);
  }
  ++record_count_;
  if (keep_records_) records_.push_back(r);
}

double QueryLedger::total(Variant v) const {
  const auto i = static_cast<std::size_t>(v);
  return seen_[i] ? totals_[i] : kNoEstimate;
}

void QueryLedger::write_csv(std::ostream& out) const {
  out << "level,k,algo,list_size,t,classical_calls,est_ql,est_qlsg,est_sql,est_sqlsg,est_eql,"
         "delta\n";
  for (const MoveRecord& r : records_) {
    out << r.level << ',' << r.k << ',' << to_string(r.algorithm) << ',' << r.list_size << ',';
    if (r.t >= 0) out << r.t;
    out << ',' << r.classical_calls;
    for (double e : r.estimates) out << ',' << text::format_double(e);
    out << ',' << text::format_double(r.delta) << '\n';
  }
}

void NsamplesPolicy::record_draw(bool marked) {
  if (current_ == 0) return;
  if (marked) {
    misses_ = 0;
    return;
  }
  if (++misses_ >= initial_) current_ = 0;
}

void NsamplesPolicy::observe_fraction(std::size_t t, std::size_t L) {
  if (current_ != 0 && t * initial_ <= L) current_ = 0;
}

void NsamplesPolicy::reset() {
  current_ = initial_;
  misses_ = 0;
}

MaxFindCost maxfind_cost(std::size_t delta_u, double eps, const CostParams& p) {
  const double classical = static_cast<double>(delta_u);
  if (delta_u <= 1) return {classical, MaxFindMethod::classical};
  const double quantum = e_qmax(delta_u, eps, p);
  if (classical <= quantum) return {classical, MaxFindMethod::classical};
  return {quantum, MaxFindMethod::quantum};
}

double max_moves_bound(const Graph& g) {
  const double w = g.total_weight();
  return 2.0 * w * w;
}

void write_partition(std::ostream& out, std::span<const CommunityId> labels) {
  for (std::size_t u = 0; u < labels.size(); ++u) out << u << ' ' << labels[u] << '\n';
}

}  // namespace qlouvain
