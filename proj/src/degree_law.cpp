#include "pamle/degree_law.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pamle {

namespace {

void check_delta(double delta) {
  if (!(delta > -1.0)) throw std::domain_error("attachment parameter must be > -1");
}

// One-step iterator over the limiting-law recursion
//   p_k = ((k-1+delta) p_{k-1} + theta r_k) / (theta + k + delta),  p_0 = 0,
// carrying the exact tail P(degree > k) = (k+delta) p_k / theta + r_{>k}.
struct LawIter {
  double delta;
  double theta;
  double mu;
  double norm;  // 2 mu + delta
  const InitialDegreeModel* r;
  int k = 0;
  double p = 0.0;
  double p_tail = 1.0;
  double q = 0.0;

  LawIter(double delta_, const InitialDegreeModel& r_)
      : delta(delta_),
        theta(2.0 + delta_ / r_.mean()),
        mu(r_.mean()),
        norm(2.0 * r_.mean() + delta_),
        r(&r_) {}

  void advance() {
    ++k;
    p = ((k - 1 + delta) * p + theta * r->pmf(k)) / (theta + k + delta);
    p_tail = (k + delta) * p / theta + r->tail(k);
    q = (k + delta) * p / norm;
  }

  // Sum of q_j for j > k; exact once k is past the initial-degree support,
  // where the recursion telescopes to a gamma-ratio form.
  double q_tail() const {
    return (k + delta) * (k + 1 + delta) * p / ((theta - 1.0) * norm);
  }
};

}  // namespace

LimitLaw limit_law(double delta, const InitialDegreeModel& r, double tail_tol,
                   std::int64_t max_terms) {
  check_delta(delta);
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw std::invalid_argument("tail_tol must be in (0,1)");

  LimitLaw law;
  law.delta = delta;
  law.mu = r.mean();
  law.theta = 2.0 + delta / law.mu;
  law.tail_tol = tail_tol;
  law.p.push_back(0.0);
  law.p_tail.push_back(1.0);
  law.q.push_back(0.0);

  LawIter it(delta, r);
  while (true) {
    it.advance();
    law.p.push_back(it.p);
    law.p_tail.push_back(it.p_tail);
    law.q.push_back(it.q);
    if (it.k >= r.support_max() && it.p_tail < tail_tol) break;
    if (it.k >= max_terms)
      throw std::runtime_error("limit_law: tail tolerance not reached within " +
                               std::to_string(max_terms) + " terms");
  }
  law.trunc_mass = it.p_tail;
  law.q_trunc_mass = it.q_tail();
  return law;
}

LimitLaw fixed_m_law(double delta, int m, int k_max) {
  check_delta(delta);
  if (m < 1) throw std::invalid_argument("fixed initial degree must be >= 1");
  if (k_max < m) throw std::invalid_argument("fixed_m_law: k_max must be >= m");

  LimitLaw law;
  law.delta = delta;
  law.mu = static_cast<double>(m);
  law.theta = 2.0 + delta / m;
  const double theta = law.theta;
  const double norm = 2.0 * m + delta;
  // log of theta * Gamma(m+delta+theta) / Gamma(m+delta)
  const double log_coef = std::log(theta) + std::lgamma(m + delta + theta) - std::lgamma(m + delta);

  law.p.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  law.p_tail.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  law.q.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 0; k < m && k <= k_max; ++k) law.p_tail[static_cast<std::size_t>(k)] = 1.0;
  for (int k = m; k <= k_max; ++k) {
    const double pk = std::exp(log_coef + std::lgamma(k + delta) - std::lgamma(k + 1 + delta + theta));
    law.p[static_cast<std::size_t>(k)] = pk;
    law.p_tail[static_cast<std::size_t>(k)] = (k + delta) * pk / theta;
    law.q[static_cast<std::size_t>(k)] = (k + delta) * pk / norm;
  }
  law.trunc_mass = law.p_tail[static_cast<std::size_t>(k_max)];
  law.q_trunc_mass =
      (k_max + delta) * (k_max + 1 + delta) * law.p[static_cast<std::size_t>(k_max)] / ((theta - 1.0) * norm);
  law.tail_tol = law.trunc_mass;
  return law;
}

double q_weighted_sum(double delta_law, const InitialDegreeModel& r, double delta_eval, int s,
                      double tail_tol, std::int64_t max_terms) {
  check_delta(delta_law);
  check_delta(delta_eval);
  if (s != 1 && s != 2) throw std::invalid_argument("q_weighted_sum: s must be 1 or 2");
  if (!(tail_tol > 0.0)) throw std::invalid_argument("q_weighted_sum: tail_tol must be positive");

  LawIter it(delta_law, r);
  long double acc = 0.0L;
  while (true) {
    it.advance();
    const double w = it.k + delta_eval;
    acc += it.q / (s == 1 ? w : w * w);
    if (it.k >= r.support_max()) {
      const double w1 = it.k + 1 + delta_eval;
      const double remainder = it.q_tail() / (s == 1 ? w1 : w1 * w1);
      if (remainder < tail_tol) break;
    }
    if (it.k >= max_terms)
      throw std::runtime_error("q_weighted_sum: tail tolerance not reached within " +
                               std::to_string(max_terms) + " terms");
  }
  return static_cast<double>(acc);
}

double limit_score(double delta, const LimitLaw& law0, const InitialDegreeModel& r) {
  check_delta(delta);
  const double mu = r.mean();
  const double tol = law0.tail_tol > 0.0 ? law0.tail_tol : 1e-12;
  // sum_k (p0_{>k} - r_{>k})/(k+delta) = mu * sum_k q0_k/(k+delta)
  const double series = mu * q_weighted_sum(law0.delta, r, delta, 1, tol / mu);
  return series - 1.0 / (2.0 + delta / mu);
}

double asymptotic_information(double delta0, const InitialDegreeModel& r, double tail_tol) {
  check_delta(delta0);
  const double mu = r.mean();
  const double series = mu * q_weighted_sum(delta0, r, delta0, 2, tail_tol / mu);
  const double nu0 = series - mu / ((2.0 * mu + delta0) * (2.0 * mu + delta0));
  if (!(nu0 > 0.0))
    throw std::runtime_error("asymptotic_information: nonpositive value; tighten tail_tol");
  return nu0;
}

double qmle_extra_variance(double delta0, const InitialDegreeModel& r, double /*tail_tol*/) {
  check_delta(delta0);
  const double mu = r.mean();
  const double denom = delta0 + 2.0 * mu;
  const int k_hi = r.support_max();

  // g(m) = sum_k (1{m>k} - r_{>k})/(k+delta0) + (m-mu)/(delta0+2mu);
  // every term vanishes for k past the support, so the sums are finite.
  long double e_g = 0.0L, e_g2 = 0.0L, e_gm = 0.0L;
  for (int m = r.support_min(); m <= k_hi; ++m) {
    const double rm = r.pmf(m);
    if (rm == 0.0) continue;
    long double g = (m - mu) / denom;
    for (int k = 1; k < k_hi; ++k) {
      const double ind = (m > k) ? 1.0 : 0.0;
      g += (ind - r.tail(k)) / (k + delta0);
    }
    e_g += rm * g;
    e_g2 += rm * g * g;
    e_gm += rm * g * m;
  }
  const long double var_g = e_g2 - e_g * e_g;
  const double var_m = r.variance();
  const double d2 = denom * denom;
  const double value = static_cast<double>(var_g) + 8.0 * mu * mu * var_m / (d2 * d2) -
                       4.0 * mu * static_cast<double>(e_gm) / d2;
  if (value < -1e-12)
    throw std::logic_error("qmle_extra_variance: negative variance, inconsistent inputs");
  return value < 0.0 ? 0.0 : value;
}

}  // namespace pamle
