// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any criterion fails.  An optional list of criterion numbers
// restricts the run (e.g. ./acceptance 2 5 9).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "pamle/degree_law.hpp"
#include "pamle/estimators.hpp"
#include "pamle/mc_lab.hpp"
#include "pamle/pa_sim.hpp"
#include "pamle/rng.hpp"

using namespace pamle;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

McConfig mc_config(int replicates, std::int64_t n, double delta, InitialDegreeModel model,
                   std::uint64_t seed, std::vector<EstimatorKind> estimators) {
  McConfig cfg;
  cfg.replicates = replicates;
  cfg.sim.n = n;
  cfg.sim.delta = delta;
  cfg.sim.initial_degrees = std::move(model);
  cfg.base_seed = seed;
  cfg.estimators = std::move(estimators);
  return cfg;
}

const EstimatorSummary& summary_for(const McSummary& s, EstimatorKind kind) {
  for (const auto& es : s.per_estimator)
    if (es.kind == kind) return es;
  throw std::logic_error("estimator missing from summary");
}

// 1. Reduced-scale reproduction of the large simulation study:
//    R = 500, n = 150000, m = 5, delta0 = 0, full-history MLE.
Outcome criterion1() {
  auto cfg = mc_config(500, 150000, 0.0, InitialDegreeModel::degenerate(5), 999331,
                       {EstimatorKind::mle});
  const auto summary = run_mc(cfg);
  const auto& es = summary_for(summary, EstimatorKind::mle);
  const double worst = std::max(std::fabs(es.min), std::fabs(es.max));
  const double var = es.sample_variance.value_or(-1.0);
  const double predicted = es.predicted_variance.value_or(-1.0);
  const double var_gap = std::fabs(var - predicted) / predicted;
  const bool pass = es.count == 500 && es.failures == 0 && std::fabs(es.mean) < 0.0025 &&
                    var >= 0.00028 && var <= 0.00040 && worst < 0.09 && var_gap < 0.15;
  return {pass,
          fmt("mean=%.6f samp_var=%.8f pred_var=%.8f gap=%.3f min=%.6f max=%.6f (R=%lld, failures=%lld)",
              es.mean, var, predicted, var_gap, es.min, es.max, static_cast<long long>(es.count),
              static_cast<long long>(es.failures))};
}

// 2. Predicted variance chain: 1/(150000 nu0) against the reported value.
Outcome criterion2() {
  const double nu0 = asymptotic_information(0.0, InitialDegreeModel::degenerate(5), 1e-13);
  const double implied = 1.0 / (150000.0 * nu0);
  const double rel = std::fabs(implied - 0.00033594) / 0.00033594;
  return {rel < 0.005, fmt("nu0=%.8f implied_var=%.10f rel_err=%.2e", nu0, implied, rel)};
}

// 3. Exact-law sampler oracle on the degrees-{2,1,1} state.
Outcome criterion3() {
  const std::vector<std::uint32_t> endpoints{0, 1, 0, 2};
  const std::vector<std::uint32_t> degrees{2, 1, 1};
  const AttachmentState state{endpoints, degrees, 3};
  const int draws = 1'000'000;
  bool pass = true;
  std::string detail;
  for (double delta : {-0.5, 0.0, 1.0}) {
    RngStream rng(93, static_cast<std::uint64_t>(delta * 2 + 100));
    int hits[3] = {0, 0, 0};
    for (int i = 0; i < draws; ++i) ++hits[sample_target(state, delta, rng)];
    const double s = 3.0 * delta + 4.0;
    const double expected[3] = {(2.0 + delta) / s, (1.0 + delta) / s, (1.0 + delta) / s};
    double worst_sigmas = 0.0;
    for (int v = 0; v < 3; ++v) {
      const double freq = static_cast<double>(hits[v]) / draws;
      const double sd = std::sqrt(expected[v] * (1.0 - expected[v]) / draws);
      worst_sigmas = std::max(worst_sigmas, std::fabs(freq - expected[v]) / sd);
    }
    pass = pass && worst_sigmas < 3.0;
    detail += fmt("delta=%+.1f worst=%.2fsd  ", delta, worst_sigmas);
  }
  return {pass, detail};
}

// 4. Sufficiency: full-history and snapshot fixed-m estimates agree.
Outcome criterion4() {
  double worst = 0.0;
  const int ms[3] = {1, 2, 5};
  for (int i = 0; i < 50; ++i) {
    SimConfig cfg;
    cfg.n = 10000;
    cfg.delta = 0.0;
    cfg.initial_degrees = InitialDegreeModel::degenerate(ms[i % 3]);
    cfg.seed = 8041;
    cfg.stream = static_cast<std::uint64_t>(i);
    const auto stats = simulate(cfg);
    const auto full = fit_mle(stats);
    const auto snap = fit_mle_fixed_m(snapshot_stats(stats));
    if (!full.converged || !snap.converged)
      return {false, fmt("run %d did not converge", i)};
    worst = std::max(worst, std::fabs(full.delta_hat - snap.delta_hat));
  }
  return {worst < 1e-6, fmt("max |mle - mle_fixed_m| = %.3g over 50 runs", worst)};
}

// 5. Limiting-law identities across the (delta, r) grid.
Outcome criterion5() {
  const std::vector<double> deltas{-0.5, 0.0, 1.0, 5.0};
  const std::vector<InitialDegreeModel> models{
      InitialDegreeModel::degenerate(1), InitialDegreeModel::degenerate(5),
      InitialDegreeModel::uniform_range(1, 3), InitialDegreeModel::truncated_geometric(0.3, 50)};
  double worst_rec = 0.0, worst_lemma = 0.0, worst_p = 0.0, worst_q = 0.0;
  for (double delta : deltas) {
    for (const auto& r : models) {
      const auto law = limit_law(delta, r, 1e-8);
      long double sum_p = 0.0L, sum_q = 0.0L;
      for (int k = 1; k <= law.k_trunc(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double rhs =
            (k - 1 + delta) / law.theta * law.p[i - 1] - (k + delta) / law.theta * law.p[i] + r.pmf(k);
        worst_rec = std::max(worst_rec, std::fabs(law.p[i] - rhs));
        const double lemma = (k + delta) * law.p[i] / law.theta + r.tail(k);
        worst_lemma = std::max(worst_lemma, std::fabs(law.p_tail[i] - lemma));
        sum_p += law.p[i];
        sum_q += law.q[i];
      }
      worst_p = std::max(worst_p, std::fabs(static_cast<double>(sum_p) + law.trunc_mass - 1.0));
      worst_q = std::max(worst_q, std::fabs(static_cast<double>(sum_q) + law.q_trunc_mass - 1.0));
    }
  }
  double worst_fixed = 0.0;
  for (int m : {1, 2, 5}) {
    for (double delta : {-0.5, 0.0, 2.0}) {
      const auto rec = limit_law(delta, InitialDegreeModel::degenerate(m), 1e-9);
      const auto cf = fixed_m_law(delta, m, rec.k_trunc());
      for (int k = 0; k <= rec.k_trunc(); ++k)
        worst_fixed = std::max(
            worst_fixed,
            std::fabs(rec.p[static_cast<std::size_t>(k)] - cf.p[static_cast<std::size_t>(k)]));
    }
  }
  const bool pass = worst_rec < 1e-12 && worst_lemma < 1e-12 && worst_p < 1e-10 &&
                    worst_q < 1e-10 && worst_fixed < 1e-10;
  return {pass, fmt("recursion=%.2e lemma=%.2e sum_p=%.2e sum_q=%.2e fixed_vs_rec=%.2e", worst_rec,
                    worst_lemma, worst_p, worst_q, worst_fixed)};
}

// 6. Quasi-estimator variance inflation under random initial degrees.
Outcome criterion6() {
  bool pass = true;
  std::string detail;
  for (double delta0 : {0.0, 1.0}) {
    auto cfg = mc_config(500, 100000, delta0, InitialDegreeModel::uniform_range(1, 3), 2203,
                         {EstimatorKind::mle, EstimatorKind::qmle});
    const auto summary = run_mc(cfg);
    const auto& mle_es = summary_for(summary, EstimatorKind::mle);
    const auto& qmle_es = summary_for(summary, EstimatorKind::qmle);
    const double var_mle = mle_es.sample_variance.value_or(-1.0);
    const double var_qmle = qmle_es.sample_variance.value_or(-1.0);
    const double predicted = qmle_es.predicted_variance.value_or(-1.0);
    const double rel = std::fabs(var_qmle - predicted) / predicted;
    const bool ok = rel <= 0.25 && var_qmle >= 0.9 * var_mle && mle_es.failures == 0 &&
                    qmle_es.failures == 0;
    pass = pass && ok;
    detail += fmt("d0=%g: qmle_var=%.3g pred=%.3g rel=%.2f ratio=%.2f  ", delta0, var_qmle,
                  predicted, rel, var_qmle / var_mle);
  }
  return {pass, detail};
}

// 7. Coverage of the 95% observed-information intervals.
Outcome criterion7() {
  auto cfg = mc_config(1000, 10000, 0.0, InitialDegreeModel::degenerate(5), 907,
                       {EstimatorKind::mle});
  const auto summary = run_mc(cfg);
  const auto& es = summary_for(summary, EstimatorKind::mle);
  const std::int64_t covered = es.ci_covered.value_or(0);
  const bool pass = es.ci_total == 1000 && covered >= 930 && covered <= 970;
  return {pass, fmt("covered %lld / %lld nominal-95%% intervals", static_cast<long long>(covered),
                    static_cast<long long>(es.ci_total))};
}

// 8. The likelihood estimate beats the naive log-log slope, repeatedly.
Outcome criterion8() {
  auto cfg = mc_config(100, 150000, 0.0, InitialDegreeModel::degenerate(5), 3307,
                       {EstimatorKind::mle, EstimatorKind::loglog});
  const auto summary = run_mc(cfg);
  std::vector<double> abs_mle, abs_loglog;
  for (const auto& row : summary.rows) {
    if (row.report.kind == EstimatorKind::mle) abs_mle.push_back(std::fabs(row.report.delta_hat));
    if (row.report.kind == EstimatorKind::loglog)
      abs_loglog.push_back(std::fabs(row.report.delta_hat));
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t r = v.size();
    return (r % 2 == 1) ? v[r / 2] : 0.5 * (v[r / 2 - 1] + v[r / 2]);
  };
  if (abs_mle.size() != 100 || abs_loglog.size() != 100)
    return {false, "missing replicates"};
  const double med_mle = median(abs_mle);
  const double med_loglog = median(abs_loglog);
  return {med_mle < med_loglog,
          fmt("median |mle err| = %.5f vs median |loglog err| = %.5f", med_mle, med_loglog)};
}

// 9. Local quadratic expansion of the log-likelihood and the
//    derivative/antiderivative consistency of the score chain.
Outcome criterion9() {
  SimConfig scfg;
  scfg.n = 100000;
  scfg.delta = 0.0;
  scfg.initial_degrees = InitialDegreeModel::degenerate(5);
  scfg.seed = 4409;
  const auto stats = simulate(scfg);

  const double n = static_cast<double>(scfg.n);
  const double root_n = std::sqrt(n);
  const double l0 = log_likelihood(0.0, stats);
  const double s0 = score(0.0, stats);
  const double d0 = score_derivative(0.0, stats);
  double worst_lan = 0.0;
  for (double h : {-2.0, -1.0, 1.0, 2.0}) {
    const double lhs = (n + 1.0) * (log_likelihood(h / root_n, stats) - l0);
    const double linear = h * (n + 1.0) * s0 / root_n;
    const double quad = 0.5 * h * h * d0;
    const double remainder = std::fabs(lhs - linear - quad) / (h * h);
    worst_lan = std::max(worst_lan, remainder);
  }

  auto fd4 = [](auto&& f, double x) {
    const double h = 0.001 * (1.0 + x);
    return (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
  };
  double worst_fd = 0.0;
  for (double d : {-0.2, 1.5, 2.5, 3.5}) {
    const double fd1 = fd4([&](double x) { return log_likelihood(x, stats); }, d);
    const double e1 = score(d, stats);
    worst_fd = std::max(worst_fd, std::fabs(fd1 - e1) / std::fabs(e1));
    const double fd2 = fd4([&](double x) { return score(x, stats); }, d);
    const double e2 = score_derivative(d, stats);
    worst_fd = std::max(worst_fd, std::fabs(fd2 - e2) / std::fabs(e2));
  }
  const bool pass = worst_lan < 0.05 && worst_fd < 1e-8;
  return {pass, fmt("max LAN remainder / h^2 = %.4f, max FD rel err = %.2e", worst_lan, worst_fd)};
}

// 10. Wall-clock budget: one large simulation and one full solve.
Outcome criterion10() {
  using clock = std::chrono::steady_clock;
  SimConfig cfg;
  cfg.n = 150000;
  cfg.delta = 0.0;
  cfg.initial_degrees = InitialDegreeModel::degenerate(5);
  cfg.seed = 515001;

  const auto t0 = clock::now();
  const auto stats = simulate(cfg);
  const auto t1 = clock::now();
  const auto rep = fit_mle(stats);
  const auto t2 = clock::now();

  const double sim_s = std::chrono::duration<double>(t1 - t0).count();
  const double fit_s = std::chrono::duration<double>(t2 - t1).count();
  const bool pass = sim_s < 1.0 && fit_s < 2.0 && rep.converged;
  return {pass, fmt("simulate %.3fs (< 1s), mle solve %.3fs (< 2s), delta_hat=%.5f", sim_s, fit_s,
                    rep.delta_hat)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "reduced-scale study reproduction", criterion1},
      {2, "predicted variance chain", criterion2},
      {3, "exact-law sampler oracle", criterion3},
      {4, "snapshot sufficiency at constant m", criterion4},
      {5, "limiting-law identities", criterion5},
      {6, "quasi-estimator variance inflation", criterion6},
      {7, "confidence interval coverage", criterion7},
      {8, "log-log baseline comparison", criterion8},
      {9, "quadratic expansion and derivative consistency", criterion9},
      {10, "performance budget", criterion10},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[criterion %2d] %s  %s: %s\n", c.id, outcome.pass ? "PASS" : "FAIL", c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
