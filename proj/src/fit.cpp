// qlouvain - fit.cpp
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "qlouvain/harness.hpp"
#include "text.hpp"

namespace qlouvain {

FitResult weighted_loglog_fit(const std::vector<double>& n, const std::vector<double>& y) {
  if (n.size() != y.size()) throw std::invalid_argument("fit: size mismatch");
  if (std::set<double>(n.begin(), n.end()).size() < 3) {
    throw std::invalid_argument("fit: need at least three distinct n");
  }
  std::vector<double> x(n.size()), ly(n.size()), w(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 1.0) || !(y[i] > 0.0)) {
      throw std::invalid_argument("fit: need n > 1 and positive values");
    }
    x[i] = std::log(n[i]);
    ly[i] = std::log(y[i]);
    w[i] = x[i];
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * ly[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += w[i] * (x[i] - mx) * (ly[i] - my);
    sxx += w[i] * (x[i] - mx) * (x[i] - mx);
  }
  FitResult f;
  f.points = x.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    f.residuals.push_back(ly[i] - (f.slope * x[i] + f.intercept));
  }
  return f;
}

std::vector<FitResult> fit_variants(const std::vector<VariantSummary>& summary) {
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<double>, std::vector<double>>>
      series;
  for (const auto& s : summary) {
    auto& [ns, ys] = series[{s.family, s.variant}];
    ns.push_back(static_cast<double>(s.n));
    ys.push_back(s.mean_queries);
  }
  std::vector<FitResult> out;
  std::map<std::string, double> baseline;
  for (const auto& [key, data] : series) {
    if (std::set<double>(data.first.begin(), data.first.end()).size() < 3) continue;
    FitResult f = weighted_loglog_fit(data.first, data.second);
    f.family = key.first;
    f.variant = key.second;
    if (f.variant == "OL") baseline[f.family] = f.slope;
    out.push_back(std::move(f));
  }
  if (out.empty()) throw std::invalid_argument("fit: no variant has three distinct n");
  for (auto& f : out) {
    auto it = baseline.find(f.family);
    if (it != baseline.end()) f.speedup = it->second / f.slope;
  }
  return out;
}

void write_fits_csv(std::ostream& out, const std::vector<FitResult>& fits) {
  out << "family,variant,points,slope,intercept,speedup,residuals\n";
  for (const auto& f : fits) {
    out << f.family << ',' << f.variant << ',' << f.points << ','
        << text::format_double(f.slope) << ',' << text::format_double(f.intercept) << ','
        << (f.speedup ? text::format_double(*f.speedup) : std::string()) << ',';
    for (std::size_t i = 0; i < f.residuals.size(); ++i) {
      out << (i ? ";" : "") << text::format_double(f.residuals[i]);
    }
    out << '\n';
  }
}

std::vector<FitResult> fit_moves(const std::vector<ResultRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<double>>> groups;
  for (const auto& r : rows) {
    if (r.timed_out) continue;
    groups[{r.family, std::string(to_string(r.algorithm))}][r.n].push_back(
        static_cast<double>(r.moves));
  }
  std::vector<FitResult> out;
  for (const auto& [key, by_n] : groups) {
    if (by_n.size() < 3) continue;
    std::vector<double> ns, ts;
    for (const auto& [n, moves] : by_n) {
      double s = 0.0;
      for (double m : moves) s += m;
      ns.push_back(static_cast<double>(n));
      ts.push_back(s / static_cast<double>(moves.size()));
    }
    FitResult f = weighted_loglog_fit(ns, ts);
    f.family = key.first;
    f.variant = key.second;
    out.push_back(std::move(f));
  }
  if (out.empty()) throw std::invalid_argument("moves report: need at least three distinct n");
  return out;
}

}  // namespace qlouvain
