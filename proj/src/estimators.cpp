#include "pamle/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "pamle/degree_law.hpp"
#include "pamle/normal.hpp"
#include "pamle/root_finding.hpp"

namespace pamle {

namespace {

constexpr double kFlatEps = 1e-13;

void check_delta(double delta) {
  if (!(delta > -1.0)) throw std::domain_error("attachment parameter must be > -1");
}

void require_history(const EvolutionStats& stats) {
  if (!stats.has_history_sums())
    throw std::invalid_argument(
        "full-history likelihood needs the edge-count sequence; snapshots support "
        "the fixed-m and quasi estimators");
}

// Degree-side sums: f(k) weighted by N_{>k}(n) - R_{>k}(n), k >= 1.
template <class F>
long double tail_weighted_sum(const EvolutionStats& stats, F&& f) {
  long double acc = 0.0L;
  const auto& tails = stats.tail_counts;
  const auto& r_tails = stats.r_tail_counts;
  for (std::size_t k = 1; k < tails.size(); ++k) {
    const std::int64_t diff = tails[k] - (k < r_tails.size() ? r_tails[k] : 0);
    if (diff != 0) acc += static_cast<long double>(diff) * f(static_cast<double>(k));
  }
  return acc;
}

// Same weights with R_{>k} = (n+1) 1{k < m}.
template <class F>
long double tail_weighted_sum_fixed(const EvolutionStats& stats, int m, F&& f) {
  long double acc = 0.0L;
  const auto& tails = stats.tail_counts;
  for (std::size_t k = 1; k < tails.size(); ++k) {
    const std::int64_t diff = tails[k] - (static_cast<int>(k) < m ? stats.n + 1 : 0);
    if (diff != 0) acc += static_cast<long double>(diff) * f(static_cast<double>(k));
  }
  return acc;
}

// Attachment-side sums over the realized edge-count path: each placed
// edge (t, i) contributes f(S) with S = t delta + 2 M_{t-1} + (i-1).
template <class F>
long double preference_sum(const EvolutionStats& stats, double delta, F&& f) {
  long double acc = 0.0L;
  for (std::int64_t t = 2; t <= stats.n; ++t) {
    const int mt = stats.m_seq[static_cast<std::size_t>(t - 1)];
    const double base =
        static_cast<double>(t) * delta + 2.0 * static_cast<double>(stats.cum_edges[static_cast<std::size_t>(t - 2)]);
    for (int i = 0; i < mt; ++i) acc += f(static_cast<double>(t), base + i);
  }
  return acc;
}

// Deterministic constant-m edge-count path: M_{t-1} = m (t-1).
template <class F>
long double preference_sum_fixed(std::int64_t n, int m, double delta, F&& f) {
  long double acc = 0.0L;
  for (std::int64_t t = 2; t <= n; ++t) {
    const double base = static_cast<double>(t) * delta + 2.0 * static_cast<double>(m) * static_cast<double>(t - 1);
    for (int i = 0; i < m; ++i) acc += f(static_cast<double>(t), base + i);
  }
  return acc;
}

}  // namespace

const char* to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::mle: return "mle";
    case EstimatorKind::mle_fixed_m: return "mle_fixed_m";
    case EstimatorKind::qmle: return "qmle";
    case EstimatorKind::loglog: return "loglog";
  }
  return "?";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "mle") return EstimatorKind::mle;
  if (name == "mle_fixed_m" || name == "mle-fixed-m") return EstimatorKind::mle_fixed_m;
  if (name == "qmle") return EstimatorKind::qmle;
  if (name == "loglog") return EstimatorKind::loglog;
  throw std::invalid_argument("unknown estimator: " + name);
}

const char* to_string(BoundaryHit b) {
  switch (b) {
    case BoundaryHit::none: return "none";
    case BoundaryHit::lower: return "lower";
    case BoundaryHit::upper: return "upper";
    case BoundaryHit::flat: return "flat";
  }
  return "?";
}

double log_likelihood(double delta, const EvolutionStats& stats) {
  check_delta(delta);
  require_history(stats);
  const long double degree_part =
      tail_weighted_sum(stats, [&](double k) { return std::log(k + delta); });
  const long double pref_part = preference_sum(stats, delta, [](double, double s) {
    if (!(s > 0.0)) throw std::domain_error("nonpositive total preference");
    return std::log(s);
  });
  return static_cast<double>((degree_part - pref_part) / static_cast<long double>(stats.n + 1));
}

double score(double delta, const EvolutionStats& stats) {
  check_delta(delta);
  require_history(stats);
  const long double degree_part =
      tail_weighted_sum(stats, [&](double k) { return 1.0 / (k + delta); });
  const long double pref_part =
      preference_sum(stats, delta, [](double t, double s) { return t / s; });
  return static_cast<double>((degree_part - pref_part) / static_cast<long double>(stats.n + 1));
}

double score_derivative(double delta, const EvolutionStats& stats) {
  check_delta(delta);
  require_history(stats);
  const long double degree_part =
      tail_weighted_sum(stats, [&](double k) { return 1.0 / ((k + delta) * (k + delta)); });
  const long double pref_part =
      preference_sum(stats, delta, [](double t, double s) { return (t / s) * (t / s); });
  return static_cast<double>((-degree_part + pref_part) / static_cast<long double>(stats.n + 1));
}

double log_likelihood_fixed_m(double delta, const EvolutionStats& snapshot, int m) {
  check_delta(delta);
  const long double degree_part =
      tail_weighted_sum_fixed(snapshot, m, [&](double k) { return std::log(k + delta); });
  const long double pref_part = preference_sum_fixed(
      snapshot.n, m, delta, [](double, double s) { return std::log(s); });
  return static_cast<double>((degree_part - pref_part) / static_cast<long double>(snapshot.n + 1));
}

double score_fixed_m(double delta, const EvolutionStats& snapshot, int m) {
  check_delta(delta);
  const long double degree_part =
      tail_weighted_sum_fixed(snapshot, m, [&](double k) { return 1.0 / (k + delta); });
  const long double pref_part =
      preference_sum_fixed(snapshot.n, m, delta, [](double t, double s) { return t / s; });
  return static_cast<double>((degree_part - pref_part) / static_cast<long double>(snapshot.n + 1));
}

double score_derivative_fixed_m(double delta, const EvolutionStats& snapshot, int m) {
  check_delta(delta);
  const long double degree_part = tail_weighted_sum_fixed(
      snapshot, m, [&](double k) { return 1.0 / ((k + delta) * (k + delta)); });
  const long double pref_part = preference_sum_fixed(
      snapshot.n, m, delta, [](double t, double s) { return (t / s) * (t / s); });
  return static_cast<double>((-degree_part + pref_part) / static_cast<long double>(snapshot.n + 1));
}

namespace {

// Quasi sums run over k up to both the observed maximum degree and the
// initial-degree support (beyond the histogram N_{>k} = 0 but r_{>k} > 0).
template <class F>
long double quasi_sum(const EvolutionStats& snapshot, const InitialDegreeModel& r, F&& f) {
  const double inv_vertices = 1.0 / static_cast<double>(snapshot.n + 1);
  const int k_hi = std::max(snapshot.max_degree(), r.support_max());
  long double acc = 0.0L;
  for (int k = 1; k < k_hi; ++k) {
    const std::int64_t nk =
        (static_cast<std::size_t>(k) < snapshot.tail_counts.size()) ? snapshot.tail_counts[static_cast<std::size_t>(k)] : 0;
    const double w = static_cast<double>(nk) * inv_vertices - r.tail(k);
    if (w != 0.0) acc += static_cast<long double>(w) * f(static_cast<double>(k));
  }
  return acc;
}

}  // namespace

double quasi_log_likelihood(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r) {
  check_delta(delta);
  const long double degree_part = quasi_sum(snapshot, r, [&](double k) { return std::log(k + delta); });
  const double mu = r.mean();
  return static_cast<double>(degree_part) - mu * std::log(2.0 * mu + delta);
}

double quasi_score(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r) {
  check_delta(delta);
  const long double degree_part = quasi_sum(snapshot, r, [&](double k) { return 1.0 / (k + delta); });
  return static_cast<double>(degree_part) - 1.0 / (2.0 + delta / r.mean());
}

double quasi_score_derivative(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r) {
  check_delta(delta);
  const long double degree_part =
      quasi_sum(snapshot, r, [&](double k) { return 1.0 / ((k + delta) * (k + delta)); });
  const double mu = r.mean();
  return -static_cast<double>(degree_part) + mu / ((2.0 * mu + delta) * (2.0 * mu + delta));
}

namespace {

using Fn = std::function<double(double)>;

EstimateReport solve_score(EstimatorKind kind, std::int64_t n, const FitOptions& opt,
                           const Fn& loglik, const Fn& score_fn) {
  if (!(opt.bracket_lo > -1.0) || !(opt.bracket_lo < opt.bracket_hi))
    throw std::invalid_argument("bracket must satisfy -1 < lo < hi");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");

  EstimateReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.bracket_lo = opt.bracket_lo;
  rep.bracket_hi = opt.bracket_hi;

  const double f_lo = score_fn(opt.bracket_lo);
  const double f_hi = score_fn(opt.bracket_hi);
  const double f_mid = score_fn(0.5 * (opt.bracket_lo + opt.bracket_hi));

  if (std::fabs(f_lo) < kFlatEps && std::fabs(f_hi) < kFlatEps && std::fabs(f_mid) < kFlatEps) {
    rep.boundary = BoundaryHit::flat;
    rep.delta_hat = std::numeric_limits<double>::quiet_NaN();
    rep.score_at_estimate = f_mid;
    rep.observed_info = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }

  if ((f_lo > 0.0) != (f_hi > 0.0)) {
    const RootResult res = brent_root(score_fn, opt.bracket_lo, opt.bracket_hi, opt.tol);
    rep.delta_hat = res.x;
    rep.score_at_estimate = res.fx;
    rep.iterations = res.iterations;
    rep.converged = res.converged && std::fabs(res.fx) <= opt.tol;
    return rep;
  }

  // No sign change: maximize the likelihood directly and flag the boundary.
  const MaxResult res = golden_section_max(loglik, opt.bracket_lo, opt.bracket_hi, opt.tol);
  rep.iterations = res.iterations;
  if (res.x <= opt.bracket_lo + 2.0 * opt.tol) {
    rep.boundary = BoundaryHit::lower;
    rep.delta_hat = opt.bracket_lo;
    rep.score_at_estimate = f_lo;
  } else if (res.x >= opt.bracket_hi - 2.0 * opt.tol) {
    rep.boundary = BoundaryHit::upper;
    rep.delta_hat = opt.bracket_hi;
    rep.score_at_estimate = f_hi;
  } else {
    rep.delta_hat = res.x;
    rep.score_at_estimate = score_fn(res.x);
    rep.converged = std::fabs(rep.score_at_estimate) <= opt.tol;
  }
  return rep;
}

void attach_interval(EstimateReport& rep, const FitOptions& opt, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) return;
  const double half = normal_two_sided_critical(opt.alpha) * std::sqrt(variance);
  rep.ci = ConfidenceInterval{rep.delta_hat - half, rep.delta_hat + half, opt.alpha};
  rep.variance_estimate = variance;
}

}  // namespace

EstimateReport fit_mle(const EvolutionStats& stats, const FitOptions& opt) {
  require_history(stats);
  EstimateReport rep = solve_score(
      EstimatorKind::mle, stats.n, opt, [&](double d) { return log_likelihood(d, stats); },
      [&](double d) { return score(d, stats); });
  if (rep.converged && rep.boundary == BoundaryHit::none) {
    rep.observed_info = -score_derivative(rep.delta_hat, stats);
    if (rep.observed_info > 0.0)
      attach_interval(rep, opt, 1.0 / (static_cast<double>(stats.n) * rep.observed_info));
  }
  return rep;
}

int recover_fixed_m(const EvolutionStats& snapshot) {
  const std::int64_t edges = snapshot.edge_count();
  if (snapshot.n <= 0 || edges % snapshot.n != 0)
    throw std::invalid_argument("degree histogram is inconsistent with a constant initial degree");
  const std::int64_t m = edges / snapshot.n;
  if (m < 1) throw std::invalid_argument("recovered initial degree is not positive");
  return static_cast<int>(m);
}

EstimateReport fit_mle_fixed_m(const EvolutionStats& snapshot, int m, const FitOptions& opt) {
  const int m_rec = recover_fixed_m(snapshot);
  if (m == 0) m = m_rec;
  if (m != m_rec)
    throw std::invalid_argument("edge count does not match the stated initial degree");
  EstimateReport rep = solve_score(
      EstimatorKind::mle_fixed_m, snapshot.n, opt,
      [&](double d) { return log_likelihood_fixed_m(d, snapshot, m); },
      [&](double d) { return score_fixed_m(d, snapshot, m); });
  if (rep.converged && rep.boundary == BoundaryHit::none) {
    rep.observed_info = -score_derivative_fixed_m(rep.delta_hat, snapshot, m);
    if (rep.observed_info > 0.0)
      attach_interval(rep, opt, 1.0 / (static_cast<double>(snapshot.n) * rep.observed_info));
  }
  return rep;
}

EstimateReport fit_qmle(const EvolutionStats& snapshot, const InitialDegreeModel& r,
                        const FitOptions& opt) {
  EstimateReport rep = solve_score(
      EstimatorKind::qmle, snapshot.n, opt,
      [&](double d) { return quasi_log_likelihood(d, snapshot, r); },
      [&](double d) { return quasi_score(d, snapshot, r); });
  if (rep.converged && rep.boundary == BoundaryHit::none) {
    rep.observed_info = -quasi_score_derivative(rep.delta_hat, snapshot, r);
    if (rep.observed_info > 0.0) {
      // asymptotic variance (nu0 + nu~0)/nu0^2, with the observed
      // information standing in for nu0 and nu~0 taken at the estimate
      const double extra = qmle_extra_variance(rep.delta_hat, r);
      const double info = rep.observed_info;
      attach_interval(rep, opt, (info + extra) / (info * info * static_cast<double>(snapshot.n)));
    }
  }
  return rep;
}

EstimateReport fit_loglog(const EvolutionStats& snapshot, int k_min, int k_max, double mu) {
  if (k_max == 0) k_max = snapshot.max_degree();
  if (!(k_min >= 1) || !(k_min < k_max)) throw std::invalid_argument("loglog: need 1 <= k_min < k_max");

  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
  long n_pts = 0;
  const double inv_vertices = 1.0 / static_cast<double>(snapshot.n + 1);
  const int hi = std::min<int>(k_max, snapshot.max_degree());
  for (int k = std::max(1, k_min); k <= hi; ++k) {
    const std::int64_t nk = snapshot.degree_hist[static_cast<std::size_t>(k)];
    if (nk <= 0) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(static_cast<double>(nk) * inv_vertices);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n_pts;
  }
  if (n_pts < 3) throw std::invalid_argument("loglog: fewer than 3 nonzero histogram cells in range");

  const long double den = sxx - sx * sx / n_pts;
  const double slope = static_cast<double>((sxy - sx * sy / n_pts) / den);
  const double tau = -slope;

  EstimateReport rep;
  rep.kind = EstimatorKind::loglog;
  rep.n = snapshot.n;
  rep.bracket_lo = k_min;
  rep.bracket_hi = k_max;
  rep.converged = true;
  rep.delta_hat = tau - 3.0;
  rep.tau_hat = tau;
  rep.delta_hat_scaled = mu * (tau - 3.0);
  rep.mu_used = mu;
  rep.observed_info = std::numeric_limits<double>::quiet_NaN();
  rep.score_at_estimate = std::numeric_limits<double>::quiet_NaN();
  rep.iterations = static_cast<int>(n_pts);
  return rep;
}

double estimate_mu(const EvolutionStats& snapshot) {
  long double twice_edges = 0.0L;
  for (std::size_t k = 1; k < snapshot.degree_hist.size(); ++k)
    twice_edges += static_cast<long double>(k) * snapshot.degree_hist[k];
  return static_cast<double>(twice_edges / (2.0L * static_cast<long double>(snapshot.n)));
}

}  // namespace pamle
