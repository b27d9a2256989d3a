#pragma once

#include <cstdint>
#include <vector>

#include "pamle/initial_degree.hpp"

namespace pamle {

/// Limiting degree distribution of the attachment process at a given
/// affine parameter, stored up to a truncation index.  Tail masses are
/// computed analytically (never by subtraction from one), so the stored
/// prefix plus the recorded masses satisfy the distribution identities
/// to within accumulation error.
struct LimitLaw {
  double delta = 0.0;
  double theta = 0.0;  // 2 + delta/mu
  double mu = 0.0;     // mean initial degree
  double tail_tol = 0.0;
  std::vector<double> p;       // p[k], k = 0..k_trunc, p[0] = 0
  std::vector<double> p_tail;  // p_tail[k] = P(degree > k)
  std::vector<double> q;       // q[k] = (k+delta) p[k] / (2 mu + delta)
  double trunc_mass = 0.0;     // p_tail at k_trunc
  double q_trunc_mass = 0.0;   // sum of q beyond k_trunc

  int k_trunc() const { return static_cast<int>(p.size()) - 1; }
};

/// Forward recursion from p_0 = 0, truncated at the smallest K with
/// P(degree > K) < tail_tol (and K past the initial-degree support).
LimitLaw limit_law(double delta, const InitialDegreeModel& r, double tail_tol,
                   std::int64_t max_terms = 20'000'000);

/// Closed form for a degenerate initial degree m, evaluated in log-gamma
/// space; rows stored for k = 0..k_max.
LimitLaw fixed_m_law(double delta, int m, int k_max);

/// Sum over k of q_k(delta_law) / (k + delta_eval)^s for s in {1,2},
/// with the series continued until the certified remainder drops below
/// tail_tol.  The q-weights are taken under the law at delta_law.
double q_weighted_sum(double delta_law, const InitialDegreeModel& r, double delta_eval, int s,
                      double tail_tol, std::int64_t max_terms = 2'000'000'000);

/// Population score at delta when the data-generating parameter is the
/// one law0 was built under.  Vanishes at delta = law0.delta; positive
/// below, negative above.
double limit_score(double delta, const LimitLaw& law0, const InitialDegreeModel& r);

/// Inverse asymptotic variance of the history-based estimator (nu0).
double asymptotic_information(double delta0, const InitialDegreeModel& r, double tail_tol = 1e-12);

/// Extra asymptotic variance of the quasi-score relative to the true
/// score (nu~0).  Exact finite sums over the initial-degree support; the
/// tolerance parameter is kept for interface uniformity.
double qmle_extra_variance(double delta0, const InitialDegreeModel& r, double tail_tol = 1e-12);

}  // namespace pamle
