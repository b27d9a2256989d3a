#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pamle/initial_degree.hpp"
#include "pamle/pa_sim.hpp"

namespace pamle {

enum class EstimatorKind { mle, mle_fixed_m, qmle, loglog };

const char* to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

enum class BoundaryHit { none, lower, upper, flat };
const char* to_string(BoundaryHit b);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.05;
};

struct EstimateReport {
  EstimatorKind kind = EstimatorKind::mle;
  double delta_hat = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
  BoundaryHit boundary = BoundaryHit::none;
  double observed_info = 0.0;  // -(second derivative of the normalized log-likelihood)
  std::optional<ConfidenceInterval> ci;
  double score_at_estimate = 0.0;
  int iterations = 0;
  std::int64_t n = 0;
  std::optional<double> variance_estimate;  // implied variance of delta_hat

  // log-log regression extras
  std::optional<double> tau_hat;
  std::optional<double> delta_hat_scaled;  // mu * (tau_hat - 3)
  std::optional<double> mu_used;
};

struct FitOptions {
  double bracket_lo = -0.99;
  double bracket_hi = 25.0;
  double tol = 1e-8;
  double alpha = 0.05;
};

// Normalized log-likelihood of the attachment history (delta-dependent
// part only, divided by n+1) and its first two derivatives in delta.
double log_likelihood(double delta, const EvolutionStats& stats);
double score(double delta, const EvolutionStats& stats);
double score_derivative(double delta, const EvolutionStats& stats);

// Constant-initial-degree versions, reconstructed from the snapshot: the
// edge-count path is deterministic given m, so these equal the
// full-history functions on any constant-m realization.
double log_likelihood_fixed_m(double delta, const EvolutionStats& snapshot, int m);
double score_fixed_m(double delta, const EvolutionStats& snapshot, int m);
double score_derivative_fixed_m(double delta, const EvolutionStats& snapshot, int m);

// Quasi-likelihood: initial-degree history replaced by its known law.
double quasi_log_likelihood(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r);
double quasi_score(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r);
double quasi_score_derivative(double delta, const EvolutionStats& snapshot, const InitialDegreeModel& r);

EstimateReport fit_mle(const EvolutionStats& stats, const FitOptions& opt = {});
/// m = 0 recovers the initial degree from the edge count.
EstimateReport fit_mle_fixed_m(const EvolutionStats& snapshot, int m = 0, const FitOptions& opt = {});
EstimateReport fit_qmle(const EvolutionStats& snapshot, const InitialDegreeModel& r,
                        const FitOptions& opt = {});

/// Least squares of log empirical degree fraction on log degree over the
/// nonzero histogram cells in [k_min, k_max] (k_max = 0 means the maximum
/// degree).  Reports both the raw convention delta = tau - 3 and the
/// scaled one delta = mu (tau - 3).  No confidence interval is attached.
EstimateReport fit_loglog(const EvolutionStats& snapshot, int k_min, int k_max, double mu);

/// mu-hat = sum_k k N_k(n) / (2n).
double estimate_mu(const EvolutionStats& snapshot);

/// Edge count divided by n; validates that the histogram is consistent
/// with a constant initial degree.
int recover_fixed_m(const EvolutionStats& snapshot);

}  // namespace pamle
