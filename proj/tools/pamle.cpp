// Command-line driver: simulate attachment networks, estimate the affine
// parameter, run Monte Carlo studies, and tabulate limiting degree laws.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <type_traits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pamle/degree_law.hpp"
#include "pamle/estimators.hpp"
#include "pamle/io.hpp"
#include "pamle/mc_lab.hpp"
#include "pamle/pa_sim.hpp"
#include "pamle/version.hpp"

namespace fs = std::filesystem;
using pamle::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

pamle::InitialDegreeModel resolve_model(int m, const std::string& pmf_file, const char* context) {
  if (m > 0 && !pmf_file.empty())
    throw std::invalid_argument(std::string(context) + ": give either --m or --pmf-file, not both");
  if (m > 0) return pamle::InitialDegreeModel::degenerate(m);
  if (!pmf_file.empty()) return pamle::io::model_from_pmf_csv(pmf_file);
  throw std::invalid_argument(std::string(context) + ": one of --m or --pmf-file is required");
}

pamle::EvolutionStats load_stats(const std::string& input) {
  fs::path path(input);
  if (fs::is_directory(path)) path /= "stats.json";
  return pamle::io::stats_from_json(pamle::io::read_json_file(path));
}

void print_estimate_line(const pamle::EstimateReport& rep) {
  std::printf("estimator=%s delta_hat=%.10g ci_lo=%.10g ci_hi=%.10g converged=%d boundary=%s "
              "observed_info=%.10g score=%.3g n=%lld\n",
              pamle::to_string(rep.kind), rep.delta_hat, rep.ci ? rep.ci->lo : std::nan(""),
              rep.ci ? rep.ci->hi : std::nan(""), rep.converged ? 1 : 0,
              pamle::to_string(rep.boundary), rep.observed_info, rep.score_at_estimate,
              static_cast<long long>(rep.n));
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::int64_t n = 0;
  double delta = 0.0;
  int m = 0;
  std::string pmf_file;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool record_history = false;
  bool snapshot_only = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args) {
  pamle::SimConfig cfg;
  cfg.n = args.n;
  cfg.delta = args.delta;
  cfg.initial_degrees = resolve_model(args.m, args.pmf_file, "simulate");
  cfg.seed = args.seed;
  cfg.stream = args.stream;
  cfg.record_history = args.record_history;
  cfg.validate();

  const pamle::EvolutionStats stats = pamle::simulate(cfg);
  const pamle::EvolutionStats* to_write = &stats;
  pamle::EvolutionStats snap;
  if (args.snapshot_only) {
    snap = pamle::snapshot_stats(stats);
    to_write = &snap;
  }

  fs::create_directories(args.out);
  const fs::path dir(args.out);
  pamle::io::write_json_file(dir / "stats.json", pamle::io::stats_to_json(*to_write));
  pamle::io::write_text_file(dir / "degree_histogram.csv", pamle::io::degree_histogram_csv(*to_write));

  const json config{{"n", args.n},
                    {"delta", args.delta},
                    {"model", pamle::io::model_to_json(cfg.initial_degrees)},
                    {"seed", args.seed},
                    {"stream", args.stream},
                    {"record_history", args.record_history},
                    {"snapshot_only", args.snapshot_only},
                    {"out", args.out}};
  pamle::io::write_json_file(dir / "manifest.json",
                             pamle::io::make_manifest("simulate", config,
                                                      {"stats.json", "degree_histogram.csv"}));

  std::printf("simulate: n=%lld vertices=%lld edges=%lld max_degree=%d -> %s\n",
              static_cast<long long>(stats.n), static_cast<long long>(stats.vertex_count()),
              static_cast<long long>(stats.edge_count()), stats.max_degree(), args.out.c_str());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string estimator = "mle";
  int m = 0;
  std::string pmf_file;
  pamle::FitOptions fit;
  int k_min = 1;
  int k_max = 0;
  std::string out;
};

int cmd_estimate(const EstimateArgs& args) {
  const pamle::EvolutionStats stats = load_stats(args.input);
  const pamle::EstimatorKind kind = pamle::estimator_kind_from_string(args.estimator);

  pamle::EstimateReport rep;
  switch (kind) {
    case pamle::EstimatorKind::mle:
      if (!stats.has_history_sums())
        throw std::invalid_argument(
            "--estimator mle needs full-history input; a snapshot is sufficient only for "
            "mle-fixed-m (constant initial degree) or qmle (known initial-degree law)");
      rep = pamle::fit_mle(stats, args.fit);
      break;
    case pamle::EstimatorKind::mle_fixed_m:
      rep = pamle::fit_mle_fixed_m(stats, args.m, args.fit);
      break;
    case pamle::EstimatorKind::qmle: {
      if (args.m == 0 && args.pmf_file.empty())
        throw std::invalid_argument("--estimator qmle needs the initial-degree law: --pmf-file (or --m)");
      rep = pamle::fit_qmle(stats, resolve_model(args.m, args.pmf_file, "estimate"), args.fit);
      break;
    }
    case pamle::EstimatorKind::loglog:
      rep = pamle::fit_loglog(stats, args.k_min, args.k_max, pamle::estimate_mu(stats));
      break;
  }

  if (!args.out.empty()) {
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    const std::string report_name = std::string("estimate_") + pamle::to_string(kind) + ".json";
    pamle::io::write_json_file(dir / report_name, pamle::io::report_to_json(rep));
    const json config{{"input", args.input},   {"estimator", args.estimator},
                      {"m", args.m},           {"pmf_file", args.pmf_file},
                      {"bracket_lo", args.fit.bracket_lo}, {"bracket_hi", args.fit.bracket_hi},
                      {"tol", args.fit.tol},   {"alpha", args.fit.alpha},
                      {"k_min", args.k_min},   {"k_max", args.k_max},
                      {"out", args.out}};
    pamle::io::write_json_file(dir / "manifest.json",
                               pamle::io::make_manifest("estimate", config, {report_name}));
  }
  print_estimate_line(rep);
  if (kind == pamle::EstimatorKind::loglog && rep.tau_hat)
    std::printf("loglog: tau_hat=%.10g delta_raw=%.10g delta_scaled=%.10g mu=%.10g\n", *rep.tau_hat,
                rep.delta_hat, *rep.delta_hat_scaled, *rep.mu_used);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// mc
// ---------------------------------------------------------------------------

struct McArgs {
  std::string config_file;
  int replicates = 100;
  std::int64_t n = 10000;
  double delta = 0.0;
  int m = 0;
  std::string pmf_file;
  std::uint64_t seed = 1;
  std::string estimators = "mle";
  int workers = 0;
  int histogram_bins = 0;
  pamle::FitOptions fit;
  int k_min = 1;
  int k_max = 0;
  std::string out;
};

std::vector<pamle::EstimatorKind> parse_estimators(const std::string& csv) {
  std::vector<pamle::EstimatorKind> kinds;
  std::string token;
  std::istringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) kinds.push_back(pamle::estimator_kind_from_string(token));
  }
  if (kinds.empty()) throw std::invalid_argument("--estimators: empty selection");
  return kinds;
}

// Config file values fill in any flag the user did not pass explicitly.
void merge_config_file(McArgs& args, const CLI::App* cmd) {
  const auto kv = pamle::io::parse_config_file(args.config_file);
  auto take = [&](const char* key, const char* flag, auto& slot) {
    const auto it = kv.find(key);
    if (it == kv.end() || cmd->count(flag) > 0) return;
    if constexpr (std::is_same_v<std::decay_t<decltype(slot)>, std::string>) {
      slot = it->second;
    } else {
      std::istringstream ss(it->second);
      ss >> slot;
      if (ss.fail() || !ss.eof())
        throw std::invalid_argument(std::string("config value for ") + key + " is malformed");
    }
  };
  take("replicates", "--replicates", args.replicates);
  take("n", "--n", args.n);
  take("delta", "--delta", args.delta);
  take("m", "--m", args.m);
  take("pmf-file", "--pmf-file", args.pmf_file);
  take("seed", "--seed", args.seed);
  take("estimators", "--estimators", args.estimators);
  take("workers", "--workers", args.workers);
  take("histogram-bins", "--histogram-bins", args.histogram_bins);
  take("bracket-lo", "--bracket-lo", args.fit.bracket_lo);
  take("bracket-hi", "--bracket-hi", args.fit.bracket_hi);
  take("tol", "--tol", args.fit.tol);
  take("alpha", "--alpha", args.fit.alpha);
  take("k-min", "--k-min", args.k_min);
  take("k-max", "--k-max", args.k_max);
  take("out", "--out", args.out);
  for (const auto& [key, value] : kv) {
    static const std::set<std::string> known{
        "replicates", "n",     "delta",          "m",          "pmf-file", "seed",
        "estimators", "workers", "histogram-bins", "bracket-lo", "bracket-hi", "tol",
        "alpha",      "k-min", "k-max",          "out"};
    if (!known.count(key)) throw std::invalid_argument("unknown config key: " + key);
    (void)value;
  }
}

int cmd_mc(McArgs& args, const CLI::App* cmd) {
  if (!args.config_file.empty()) merge_config_file(args, cmd);
  if (args.out.empty()) throw std::invalid_argument("--out directory is required (flag or config key)");
  if (args.workers == 0) {
    if (const char* env = std::getenv("PAMLE_WORKERS")) args.workers = std::atoi(env);
  }

  pamle::McConfig cfg;
  cfg.replicates = args.replicates;
  cfg.sim.n = args.n;
  cfg.sim.delta = args.delta;
  cfg.sim.initial_degrees = resolve_model(args.m, args.pmf_file, "mc");
  cfg.base_seed = args.seed;
  cfg.estimators = parse_estimators(args.estimators);
  cfg.worker_count = args.workers;
  cfg.histogram_bins = args.histogram_bins;
  cfg.fit = args.fit;
  cfg.loglog_k_min = args.k_min;
  cfg.loglog_k_max = args.k_max;
  cfg.validate();

  const pamle::McSummary summary = pamle::run_mc(cfg);

  fs::create_directories(args.out);
  const fs::path dir(args.out);
  std::vector<std::string> outputs{"estimates.csv", "summary.json"};
  pamle::io::write_text_file(dir / "estimates.csv", pamle::io::estimates_csv(summary));
  pamle::io::write_json_file(dir / "summary.json", pamle::io::summary_to_json(summary));
  for (const auto& es : summary.per_estimator) {
    const std::string name = std::string("histogram_") + pamle::to_string(es.kind) + ".csv";
    pamle::io::write_text_file(dir / name, pamle::io::histogram_csv(es));
    outputs.push_back(name);
  }
  if (summary.per_estimator.size() == 1) {
    pamle::io::write_text_file(dir / "histogram.csv",
                               pamle::io::histogram_csv(summary.per_estimator[0]));
    outputs.push_back("histogram.csv");
  }

  const json config{{"replicates", args.replicates},
                    {"n", args.n},
                    {"delta", args.delta},
                    {"model", pamle::io::model_to_json(cfg.sim.initial_degrees)},
                    {"seed", args.seed},
                    {"estimators", args.estimators},
                    {"workers", args.workers},
                    {"histogram_bins", args.histogram_bins},
                    {"bracket_lo", args.fit.bracket_lo},
                    {"bracket_hi", args.fit.bracket_hi},
                    {"tol", args.fit.tol},
                    {"alpha", args.fit.alpha},
                    {"k_min", args.k_min},
                    {"k_max", args.k_max},
                    {"out", args.out}};
  pamle::io::write_json_file(dir / "manifest.json", pamle::io::make_manifest("mc", config, outputs));

  for (const auto& es : summary.per_estimator) {
    std::printf("mc %s: count=%lld failures=%lld mean=%.6g var=%.6g predicted_var=%.6g min=%.6g max=%.6g\n",
                pamle::to_string(es.kind), static_cast<long long>(es.count),
                static_cast<long long>(es.failures), es.mean,
                es.sample_variance.value_or(std::nan("")),
                es.predicted_variance.value_or(std::nan("")), es.min, es.max);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// limit
// ---------------------------------------------------------------------------

struct LimitArgs {
  double delta = 0.0;
  int m = 0;
  std::string pmf_file;
  double tail_tol = 1e-10;
  int k_max = 0;    // cap on rows written to CSV (0 = all stored)
  int rows = 12;    // rows echoed to stdout
  std::int64_t n = 0;
  std::string out;
};

int cmd_limit(const LimitArgs& args) {
  const auto model = resolve_model(args.m, args.pmf_file, "limit");
  const auto law = pamle::limit_law(args.delta, model, args.tail_tol);
  const double nu0 = pamle::asymptotic_information(args.delta, model);
  const double extra = pamle::qmle_extra_variance(args.delta, model);

  std::printf("limit law: delta=%.6g mu=%.6g theta=%.6g k_trunc=%d trunc_mass=%.3g\n", law.delta,
              law.mu, law.theta, law.k_trunc(), law.trunc_mass);
  std::printf("nu0 = %.6f   nu_tilde0 = %.6f\n", nu0, extra);
  if (args.n > 0) {
    const double n = static_cast<double>(args.n);
    std::printf("predicted variance at n=%lld: mle %.8g, qmle %.8g\n",
                static_cast<long long>(args.n), 1.0 / (nu0 * n), (nu0 + extra) / (nu0 * nu0 * n));
  }
  std::printf("k,p_k,p_tail,q_k\n");
  for (int k = 1; k <= std::min(args.rows, law.k_trunc()); ++k)
    std::printf("%d,%.6f,%.6f,%.6f\n", k, law.p[static_cast<std::size_t>(k)],
                law.p_tail[static_cast<std::size_t>(k)], law.q[static_cast<std::size_t>(k)]);

  if (!args.out.empty()) {
    fs::create_directories(args.out);
    const fs::path dir(args.out);
    pamle::io::write_text_file(dir / "law.csv", pamle::io::law_csv(law, args.k_max));
    const json config{{"delta", args.delta}, {"model", pamle::io::model_to_json(model)},
                      {"tail_tol", args.tail_tol}, {"k_max", args.k_max},
                      {"n", args.n},         {"out", args.out}};
    pamle::io::write_json_file(dir / "manifest.json",
                               pamle::io::make_manifest("limit", config, {"law.csv"}));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Affine preferential-attachment networks: simulation and estimation"};
  app.set_version_flag("--version", pamle::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a network and write its statistics");
  sim_cmd->add_option("--n", sim.n, "Final time index (n+1 vertices)")->required();
  sim_cmd->add_option("--delta", sim.delta, "Affine attachment parameter (> -1)")->required();
  sim_cmd->add_option("--m", sim.m, "Constant initial degree");
  sim_cmd->add_option("--pmf-file", sim.pmf_file, "CSV of k,probability rows for random initial degrees");
  sim_cmd->add_option("--seed", sim.seed, "RNG seed")->required();
  sim_cmd->add_option("--stream", sim.stream, "RNG stream index (default 0)");
  sim_cmd->add_flag("--record-history", sim.record_history, "Store every attachment draw");
  sim_cmd->add_flag("--snapshot-only", sim.snapshot_only, "Write only snapshot-visible fields");
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate the affine parameter from stored statistics");
  est_cmd->add_option("--input", est.input, "stats.json file or directory containing it")->required();
  est_cmd->add_option("--estimator", est.estimator, "mle | mle-fixed-m | qmle | loglog")->required();
  est_cmd->add_option("--m", est.m, "Constant initial degree (mle-fixed-m auto-recovers; qmle accepts)");
  est_cmd->add_option("--pmf-file", est.pmf_file, "Known initial-degree law for qmle");
  est_cmd->add_option("--bracket-lo", est.fit.bracket_lo, "Lower bracket endpoint (default -0.99)");
  est_cmd->add_option("--bracket-hi", est.fit.bracket_hi, "Upper bracket endpoint (default 25)");
  est_cmd->add_option("--tol", est.fit.tol, "Root tolerance (default 1e-8)");
  est_cmd->add_option("--alpha", est.fit.alpha, "Confidence level alpha (default 0.05)");
  est_cmd->add_option("--k-min", est.k_min, "loglog: smallest degree cell");
  est_cmd->add_option("--k-max", est.k_max, "loglog: largest degree cell (0 = max degree)");
  est_cmd->add_option("--out", est.out, "Optional output directory for the report");

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Replicate simulate-and-estimate pipelines");
  mc_cmd->add_option("--config", mc.config_file, "Flat key=value config file; flags override");
  mc_cmd->add_option("--replicates", mc.replicates, "Number of replicates");
  mc_cmd->add_option("--n", mc.n, "Final time index per replicate");
  mc_cmd->add_option("--delta", mc.delta, "True attachment parameter");
  mc_cmd->add_option("--m", mc.m, "Constant initial degree");
  mc_cmd->add_option("--pmf-file", mc.pmf_file, "Random initial-degree law");
  mc_cmd->add_option("--seed", mc.seed, "Base seed; replicate r runs on stream r");
  mc_cmd->add_option("--estimators", mc.estimators, "Comma list: mle,mle-fixed-m,qmle,loglog");
  mc_cmd->add_option("--workers", mc.workers, "Worker threads (0 = PAMLE_WORKERS or hardware)");
  mc_cmd->add_option("--histogram-bins", mc.histogram_bins, "Histogram bins (0 = Freedman-Diaconis)");
  mc_cmd->add_option("--bracket-lo", mc.fit.bracket_lo, "Lower bracket endpoint");
  mc_cmd->add_option("--bracket-hi", mc.fit.bracket_hi, "Upper bracket endpoint");
  mc_cmd->add_option("--tol", mc.fit.tol, "Root tolerance");
  mc_cmd->add_option("--alpha", mc.fit.alpha, "Confidence level alpha");
  mc_cmd->add_option("--k-min", mc.k_min, "loglog: smallest degree cell");
  mc_cmd->add_option("--k-max", mc.k_max, "loglog: largest degree cell");
  mc_cmd->add_option("--out", mc.out, "Output directory");

  LimitArgs lim;
  auto* lim_cmd = app.add_subcommand("limit", "Tabulate the limiting degree law and variance constants");
  lim_cmd->add_option("--delta", lim.delta, "Attachment parameter")->required();
  lim_cmd->add_option("--m", lim.m, "Constant initial degree");
  lim_cmd->add_option("--pmf-file", lim.pmf_file, "Random initial-degree law");
  lim_cmd->add_option("--tail-tol", lim.tail_tol, "Tail mass at truncation (default 1e-10)");
  lim_cmd->add_option("--k-max", lim.k_max, "Cap on CSV rows (0 = all stored)");
  lim_cmd->add_option("--rows", lim.rows, "Rows echoed to stdout (default 12)");
  lim_cmd->add_option("--n", lim.n, "Report predicted estimator variances at this n");
  lim_cmd->add_option("--out", lim.out, "Optional output directory for law.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (est_cmd->parsed()) return cmd_estimate(est);
    if (mc_cmd->parsed()) return cmd_mc(mc, mc_cmd);
    if (lim_cmd->parsed()) return cmd_limit(lim);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
