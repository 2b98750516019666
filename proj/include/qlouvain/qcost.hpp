// qlouvain - qcost.hpp
// Expected and worst-case query counts of the quantum search subroutines,
// in units of modularity-gain evaluations. All functions are pure.
#pragma once

#include <cstddef>

namespace qlouvain {

struct CostParams {
  double alpha = 9.2;          // constant of the unknown-t Grover bound
  double cq = 2.0;             // gain evaluations per oracle call
  double eps_total = 1e-5;     // overall failure budget
  std::size_t lswitch = 512;   // below this list size FindFirst scans classically
  std::size_t nsamples_init = 130;
  // Base of the logarithm in the move budget n log n; 0 means natural log.
  double move_budget_log_base = 0.0;
};

// The two terms are already multiplied by inner_factor, the per-check cost
// of a nested search (1 for a plain search).
struct CostBreakdown {
  double classical_sampling = 0.0;
  double grover = 0.0;
  double inner_factor = 1.0;
  double queries() const { return classical_sampling + grover; }
};

// ceil(x) that ignores floating noise just above an integer.
double guarded_ceil(double x);

// Iteration factor of the randomised Grover search; 1 <= t <= L.
double f_factor(double L, double t);
// Expected oracle calls to find one of t marked items among L.
double q_grover(double L, double t, const CostParams& p = {});
// N classical draws followed by Grover search; t = 0 gives the worst case.
CostBreakdown qsearch_breakdown(double L, double t, double nsamples, double eps,
                                const CostParams& p = {});
double e_qsearch(double L, double t, double nsamples, double eps, const CostParams& p = {});
double w_qsearch(double L, double nsamples, double eps, const CostParams& p = {});
// Worst case of the fixed-failure Grover variant used as the inner search.
double w_zalka(double L, double eps, const CostParams& p = {});
// Expected cost of quantum maximum finding over L values.
double e_qmax(std::size_t L, double eps, const CostParams& p = {});
// Outer search over L vertices, inner search over at most delta_max
// neighbouring communities.
CostBreakdown vertexfind_breakdown(double L, double t, double nsamples, double zeta,
                                   double delta_max, const CostParams& p = {});
double e_vertexfind(double L, double t, double nsamples, double zeta, double delta_max,
                    const CostParams& p = {});
// As above with the inner search replaced by a classical scan.
CostBreakdown vertexfind_sg_breakdown(double L, double t, double nsamples, double zeta,
                                      double delta_max, const CostParams& p = {});
double e_vertexfind_sg(double L, double t, double nsamples, double zeta, double delta_max,
                       const CostParams& p = {});
// Failure probability per VertexFind call inside FindFirst over L items.
double findfirst_zeta(double mu, std::size_t L);
// Per-subroutine failure probability eps_total / (n ln n).
double epsilon_budget(std::size_t n, const CostParams& p = {});
// Move budget n log n.
double move_budget(std::size_t n, const CostParams& p = {});

}  // namespace qlouvain
