#include "pamle/mc_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "pamle/normal.hpp"

namespace pamle {

void McConfig::validate() const {
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (estimators.empty()) throw std::invalid_argument("no estimators selected");
  sim.validate();
}

namespace {

struct ReplicateResult {
  std::vector<EstimateRow> rows;
  std::vector<ReplicateFailure> failures;
};

ReplicateResult run_replicate(const McConfig& config, int replicate) {
  SimConfig sim = config.sim;
  sim.seed = config.base_seed;
  sim.stream = static_cast<std::uint64_t>(replicate);
  sim.record_history = false;  // the likelihood needs only the edge-count sums

  const EvolutionStats stats = simulate(sim);

  ReplicateResult out;
  for (EstimatorKind kind : config.estimators) {
    try {
      EstimateReport rep;
      switch (kind) {
        case EstimatorKind::mle:
          rep = fit_mle(stats, config.fit);
          break;
        case EstimatorKind::mle_fixed_m:
          rep = fit_mle_fixed_m(snapshot_stats(stats), 0, config.fit);
          break;
        case EstimatorKind::qmle:
          rep = fit_qmle(snapshot_stats(stats), config.sim.initial_degrees, config.fit);
          break;
        case EstimatorKind::loglog: {
          const EvolutionStats snap = snapshot_stats(stats);
          rep = fit_loglog(snap, config.loglog_k_min, config.loglog_k_max, estimate_mu(snap));
          break;
        }
      }
      out.rows.push_back({replicate, std::move(rep)});
    } catch (const std::exception& e) {
      out.failures.push_back({replicate, kind, e.what(), sim.seed, sim.stream});
    }
  }
  return out;
}

double median_of_sorted(const std::vector<double>& v) {
  const std::size_t r = v.size();
  return (r % 2 == 1) ? v[r / 2] : 0.5 * (v[r / 2 - 1] + v[r / 2]);
}

std::optional<double> predicted_variance_for(EstimatorKind kind, const McConfig& config) {
  const double delta0 = config.sim.delta;
  const InitialDegreeModel& r = config.sim.initial_degrees;
  const double n = static_cast<double>(config.sim.n);
  switch (kind) {
    case EstimatorKind::mle:
    case EstimatorKind::mle_fixed_m: {
      const double nu0 = asymptotic_information(delta0, r);
      return 1.0 / (nu0 * n);
    }
    case EstimatorKind::qmle: {
      const double nu0 = asymptotic_information(delta0, r);
      const double extra = qmle_extra_variance(delta0, r);
      return (nu0 + extra) / (nu0 * nu0 * n);
    }
    case EstimatorKind::loglog:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<HistogramBin> build_histogram(const std::vector<double>& sorted, int bins_override,
                                          const std::optional<NormalOverlay>& asym,
                                          const std::optional<NormalOverlay>& best) {
  std::vector<HistogramBin> out;
  if (sorted.size() < 2) return out;
  const double lo = sorted.front();
  const double hi = sorted.back();
  int bins = bins_override;
  if (bins <= 0) {
    // Freedman-Diaconis; falls back to a single bin for degenerate spreads
    const double q1 = sorted[sorted.size() / 4];
    const double q3 = sorted[(3 * sorted.size()) / 4];
    const double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(sorted.size()));
    bins = (width > 0.0 && hi > lo) ? static_cast<int>(std::ceil((hi - lo) / width)) : 1;
    bins = std::clamp(bins, 1, 10'000);
  }
  const double span = (hi > lo) ? (hi - lo) : 1.0;
  const double step = span / bins;
  out.resize(static_cast<std::size_t>(bins));
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].lo = lo + b * step;
    out[static_cast<std::size_t>(b)].hi = lo + (b + 1) * step;
  }
  for (double x : sorted) {
    int b = static_cast<int>((x - lo) / step);
    b = std::clamp(b, 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].count;
  }
  const double total = static_cast<double>(sorted.size());
  auto fill_overlay = [&](const std::optional<NormalOverlay>& ov, bool asymptotic) {
    if (!ov || !(ov->variance > 0.0)) return;
    const double sd = std::sqrt(ov->variance);
    for (auto& bin : out) {
      const double mass = normal_cdf((bin.hi - ov->mean) / sd) - normal_cdf((bin.lo - ov->mean) / sd);
      (asymptotic ? bin.expected_asymptotic : bin.expected_bestfit) = total * mass;
    }
  };
  fill_overlay(asym, true);
  fill_overlay(best, false);
  return out;
}

}  // namespace

McSummary run_mc(const McConfig& config) {
  config.validate();

  const int R = config.replicates;
  std::vector<ReplicateResult> results(static_cast<std::size_t>(R));

  int workers = config.worker_count;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, R);

  if (workers == 1) {
    for (int i = 0; i < R; ++i) results[static_cast<std::size_t>(i)] = run_replicate(config, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= R) return;
        results[static_cast<std::size_t>(i)] = run_replicate(config, i);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  McSummary summary;
  summary.replicates = R;
  summary.true_delta = config.sim.delta;
  summary.base_seed = config.base_seed;
  for (auto& res : results) {
    for (auto& row : res.rows) summary.rows.push_back(std::move(row));
    for (auto& f : res.failures) summary.failures.push_back(std::move(f));
  }

  for (EstimatorKind kind : config.estimators) {
    EstimatorSummary es;
    es.kind = kind;
    std::vector<double> estimates;
    for (const auto& row : summary.rows) {
      if (row.report.kind != kind) continue;
      const EstimateReport& rep = row.report;
      if (rep.boundary != BoundaryHit::none) ++es.boundary_hits;
      if (std::isnan(rep.delta_hat)) continue;  // flat likelihood carries no estimate
      estimates.push_back(rep.delta_hat);
      if (rep.ci) {
        ++es.ci_total;
        if (rep.ci->lo <= summary.true_delta && summary.true_delta <= rep.ci->hi)
          es.ci_covered = es.ci_covered.value_or(0) + 1;
      }
    }
    for (const auto& f : summary.failures)
      if (f.kind == kind) ++es.failures;
    es.count = static_cast<std::int64_t>(estimates.size());
    if (es.ci_total > 0 && !es.ci_covered) es.ci_covered = 0;

    if (!estimates.empty()) {
      std::vector<double> sorted = estimates;
      std::sort(sorted.begin(), sorted.end());
      es.min = sorted.front();
      es.max = sorted.back();
      es.median = median_of_sorted(sorted);
      long double acc = 0.0L;
      for (double x : estimates) acc += x;
      es.mean = static_cast<double>(acc / static_cast<long double>(estimates.size()));
      es.bias = es.mean - summary.true_delta;
      long double sq = 0.0L, err = 0.0L;
      for (double x : estimates) {
        sq += (x - es.mean) * (x - es.mean);
        err += (x - summary.true_delta) * (x - summary.true_delta);
      }
      es.mse = static_cast<double>(err / static_cast<long double>(estimates.size()));
      if (estimates.size() >= 2)
        es.sample_variance = static_cast<double>(sq / static_cast<long double>(estimates.size() - 1));
      es.predicted_variance = predicted_variance_for(kind, config);

      if (es.predicted_variance)
        es.overlay_asymptotic = NormalOverlay{summary.true_delta, *es.predicted_variance};
      if (es.sample_variance) es.overlay_bestfit = NormalOverlay{es.mean, *es.sample_variance};
      es.histogram =
          build_histogram(sorted, config.histogram_bins, es.overlay_asymptotic, es.overlay_bestfit);
    }
    summary.per_estimator.push_back(std::move(es));
  }
  return summary;
}

std::vector<ProbeRow> convergence_probe(const SimConfig& config,
                                        const std::vector<std::int64_t>& checkpoints) {
  for (std::int64_t t : checkpoints)
    if (t < 1 || t > config.n) throw std::invalid_argument("checkpoint outside [1, n]");
  std::vector<std::int64_t> sorted = checkpoints;
  std::sort(sorted.begin(), sorted.end());

  const LimitLaw law = limit_law(config.delta, config.initial_degrees, 1e-10);
  std::vector<ProbeRow> rows;
  rows.reserve(sorted.size());

  const DegreeProbe probe = [&](std::int64_t t, std::span<const std::uint32_t> degrees) {
    std::vector<std::int64_t> hist;
    for (std::uint32_t d : degrees) {
      if (d >= hist.size()) hist.resize(d + 1, 0);
      ++hist[d];
    }
    const double inv = 1.0 / static_cast<double>(t + 1);
    double sup = 0.0;
    const std::size_t k_hi = std::max(hist.size(), law.p.size());
    for (std::size_t k = 1; k < k_hi; ++k) {
      const double emp = (k < hist.size()) ? static_cast<double>(hist[k]) * inv : 0.0;
      const double lim = (k < law.p.size()) ? law.p[k] : 0.0;
      sup = std::max(sup, std::fabs(emp - lim));
    }
    rows.push_back({t, sup});
  };
  simulate(config, sorted, probe);
  return rows;
}

}  // namespace pamle
