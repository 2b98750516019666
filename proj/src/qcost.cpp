// qlouvain - qcost.cpp
#include "qlouvain/qcost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qlouvain {

namespace {

void require_probability(double eps, const char* what) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::domain_error(std::string(what) + ": failure probability must lie in (0, 1)");
  }
}

double log3_inverse(double eps) { return guarded_ceil(std::log(1.0 / eps) / std::log(3.0)); }

}  // namespace

double guarded_ceil(double x) {
  return std::ceil(x - 1e-12 * std::max(1.0, std::abs(x)));
}

double f_factor(double L, double t) {
  if (!(t >= 1.0) || t > L) throw std::domain_error("f_factor: need 1 <= t <= L");
  if (4.0 * t >= L) return 2.0344;
  const double root = std::sqrt((L - t) * t);
  return 2.25 * L / root + guarded_ceil(std::log(L / (2.0 * root)) / std::log(1.2)) - 3.0;
}

double q_grover(double L, double t, const CostParams& p) {
  const double f = f_factor(L, t);
  const double ratio = f / (p.alpha * std::sqrt(L));
  if (!(ratio < 1.0)) throw std::domain_error("q_grover: F exceeds alpha sqrt(L)");
  return f * (1.0 + 1.0 / (1.0 - ratio));
}

CostBreakdown qsearch_breakdown(double L, double t, double nsamples, double eps,
                                const CostParams& p) {
  if (t < 0.0 || t > L) throw std::domain_error("e_qsearch: need 0 <= t <= L");
  CostBreakdown c;
  if (t == 0.0) {
    require_probability(eps, "e_qsearch");
    c.classical_sampling = nsamples;
    c.grover = p.alpha * p.cq * log3_inverse(eps) * std::sqrt(L);
    return c;
  }
  const double miss = std::pow(1.0 - t / L, nsamples);
  c.classical_sampling = (L / t) * (1.0 - miss);
  c.grover = miss == 0.0 ? 0.0 : miss * p.cq * q_grover(L, t, p);
  return c;
}

double e_qsearch(double L, double t, double nsamples, double eps, const CostParams& p) {
  return qsearch_breakdown(L, t, nsamples, eps, p).queries();
}

double w_qsearch(double L, double nsamples, double eps, const CostParams& p) {
  require_probability(eps, "w_qsearch");
  return nsamples + p.alpha * p.cq * log3_inverse(eps) * std::sqrt(L);
}

double w_zalka(double L, double eps, const CostParams& p) {
  require_probability(eps, "w_zalka");
  const double r = guarded_ceil(std::log(1.0 / eps) / (2.0 * std::log(4.0 / 3.0)));
  return p.cq * (5.0 * r + std::numbers::pi * std::sqrt(L) * std::sqrt(r));
}

double e_qmax(std::size_t L, double eps, const CostParams& p) {
  if (L < 1) throw std::domain_error("e_qmax: empty list");
  require_probability(eps, "e_qmax");
  const double len = static_cast<double>(L);
  double sum = 0.0;
  for (std::size_t t = 1; t < L; ++t) {
    sum += f_factor(len, static_cast<double>(t)) / static_cast<double>(t + 1);
  }
  return log3_inverse(eps) * 3.0 * p.cq * sum;
}

namespace {

CostBreakdown scaled(CostBreakdown c, double factor) {
  c.classical_sampling *= factor;
  c.grover *= factor;
  c.inner_factor = factor;
  return c;
}

}  // namespace

CostBreakdown vertexfind_breakdown(double L, double t, double nsamples, double zeta,
                                   double delta_max, const CostParams& p) {
  const CostBreakdown outer = qsearch_breakdown(L, t, nsamples, zeta / 2.0, p);
  if (delta_max <= 0.0) return scaled(outer, 0.0);
  const double inner_eps = zeta / (2.0 * w_qsearch(L, nsamples, zeta / 2.0, p));
  return scaled(outer, 2.0 * w_zalka(delta_max, inner_eps, p));
}

double e_vertexfind(double L, double t, double nsamples, double zeta, double delta_max,
                    const CostParams& p) {
  return vertexfind_breakdown(L, t, nsamples, zeta, delta_max, p).queries();
}

CostBreakdown vertexfind_sg_breakdown(double L, double t, double nsamples, double zeta,
                                      double delta_max, const CostParams& p) {
  return scaled(qsearch_breakdown(L, t, nsamples, zeta, p), 2.0 * std::max(delta_max, 0.0));
}

double e_vertexfind_sg(double L, double t, double nsamples, double zeta, double delta_max,
                       const CostParams& p) {
  return vertexfind_sg_breakdown(L, t, nsamples, zeta, delta_max, p).queries();
}

double findfirst_zeta(double mu, std::size_t L) {
  if (L < 1) throw std::domain_error("findfirst_zeta: empty list");
  if (L == 1) return mu;
  return mu / (2.0 * guarded_ceil(std::log2(static_cast<double>(L))));
}

double move_budget(std::size_t n, const CostParams& p) {
  const double x = static_cast<double>(n);
  const double base = p.move_budget_log_base;
  return x * (base > 0.0 ? std::log(x) / std::log(base) : std::log(x));
}

double epsilon_budget(std::size_t n, const CostParams& p) {
  if (n < 2) throw std::domain_error("epsilon_budget: need n >= 2");
  const double x = static_cast<double>(n);
  return p.eps_total / (x * std::log(x));
}

}  // namespace qlouvain
