#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pamle/degree_law.hpp"
#include "pamle/estimators.hpp"
#include "pamle/pa_sim.hpp"

namespace pamle {

struct McConfig {
  int replicates = 1;
  SimConfig sim;  // template; replicate r runs on stream (base_seed, r)
  std::vector<EstimatorKind> estimators{EstimatorKind::mle};
  std::uint64_t base_seed = 0;
  int worker_count = 0;    // 0 = hardware concurrency
  int histogram_bins = 0;  // 0 = Freedman-Diaconis
  FitOptions fit;
  int loglog_k_min = 1;
  int loglog_k_max = 0;  // 0 = max degree

  void validate() const;
};

struct EstimateRow {
  int replicate = 0;
  EstimateReport report;
};

struct ReplicateFailure {
  int replicate = 0;
  EstimatorKind kind = EstimatorKind::mle;
  std::string message;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::int64_t count = 0;
  double expected_asymptotic = 0.0;  // replicate count under the predicted normal
  double expected_bestfit = 0.0;     // replicate count under N(sample mean, sample var)
};

struct NormalOverlay {
  double mean = 0.0;
  double variance = 0.0;
};

struct EstimatorSummary {
  EstimatorKind kind = EstimatorKind::mle;
  std::int64_t count = 0;
  std::int64_t failures = 0;
  std::int64_t boundary_hits = 0;
  double min = 0.0, median = 0.0, mean = 0.0, max = 0.0;
  std::optional<double> sample_variance;     // unbiased, R-1 divisor
  std::optional<double> predicted_variance;  // recomputed from the limiting law
  double bias = 0.0;
  double mse = 0.0;  // mean of squared errors about the true parameter
  std::optional<std::int64_t> ci_covered;
  std::int64_t ci_total = 0;
  std::optional<NormalOverlay> overlay_asymptotic;
  std::optional<NormalOverlay> overlay_bestfit;
  std::vector<HistogramBin> histogram;
};

struct McSummary {
  int replicates = 0;
  double true_delta = 0.0;
  std::uint64_t base_seed = 0;
  std::vector<EstimateRow> rows;  // ordered by (replicate, estimator)
  std::vector<ReplicateFailure> failures;
  std::vector<EstimatorSummary> per_estimator;
};

/// Runs `replicates` simulate-then-estimate pipelines on independent
/// replicate streams and aggregates them in replicate order, so results
/// are identical for any worker count.  Estimator failures are recorded
/// with their seeds and excluded from the summary statistics; boundary
/// hits are kept and flagged.
McSummary run_mc(const McConfig& config);

struct ProbeRow {
  std::int64_t t = 0;
  double sup_distance = 0.0;  // max_k |N_k(t)/(t+1) - p_k|
};

/// Sup distance between the empirical degree fractions and the limiting
/// law at each checkpoint of a single run.
std::vector<ProbeRow> convergence_probe(const SimConfig& config,
                                        const std::vector<std::int64_t>& checkpoints);

}  // namespace pamle
