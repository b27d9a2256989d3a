#include "pamle/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pamle/version.hpp"

namespace pamle::io {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json finite_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

std::string utc_now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json model_to_json(const InitialDegreeModel& model) {
  if (model.is_degenerate()) return json{{"kind", "degenerate"}, {"m", model.degenerate_value()}};
  json pmf = json::array();
  for (int k = model.support_min(); k <= model.support_max(); ++k)
    if (model.pmf(k) > 0.0) pmf.push_back(json::array({k, model.pmf(k)}));
  return json{{"kind", "pmf"}, {"pmf", pmf}};
}

InitialDegreeModel model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "degenerate") return InitialDegreeModel::degenerate(j.at("m").get<int>());
  if (kind == "pmf") {
    std::map<int, double> pmf;
    for (const auto& entry : j.at("pmf")) pmf[entry.at(0).get<int>()] = entry.at(1).get<double>();
    return InitialDegreeModel::from_pmf(pmf);
  }
  throw std::invalid_argument("unknown initial-degree model kind: " + kind);
}

InitialDegreeModel model_from_pmf_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pmf file: " + path.string());
  std::map<int, double> pmf;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("k,", 0) == 0) continue;  // optional header
    std::istringstream ss(line);
    int k = 0;
    char comma = 0;
    double p = 0.0;
    if (!(ss >> k >> comma >> p) || comma != ',')
      throw std::invalid_argument("pmf file line not of the form k,probability: " + line);
    pmf[k] = p;
  }
  return InitialDegreeModel::from_pmf(pmf);
}

json stats_to_json(const EvolutionStats& stats) {
  json meta{{"n", stats.n}, {"delta", stats.delta}, {"seed", stats.seed}, {"stream", stats.stream}};
  if (stats.model) meta["model"] = model_to_json(*stats.model);

  json hist = json::array();
  for (std::size_t k = 1; k < stats.degree_hist.size(); ++k)
    if (stats.degree_hist[k] != 0) hist.push_back(json::array({k, stats.degree_hist[k]}));

  json j{{"format", "pamle.evolution_stats"},
         {"version", 1},
         {"meta", meta},
         {"snapshot_only", stats.snapshot_only},
         {"degree_hist", hist}};
  if (!stats.snapshot_only) j["m_seq"] = stats.m_seq;
  if (stats.history) {
    json h = json::array();
    for (const auto& e : *stats.history) h.push_back(json::array({e.t, e.i, e.degree}));
    j["history"] = std::move(h);
  }
  return j;
}

EvolutionStats stats_from_json(const json& j) {
  if (j.at("format").get<std::string>() != "pamle.evolution_stats")
    throw std::invalid_argument("not an evolution-stats document");
  EvolutionStats stats;
  const json& meta = j.at("meta");
  stats.n = meta.at("n").get<std::int64_t>();
  stats.delta = meta.at("delta").get<double>();
  stats.seed = meta.value("seed", 0ULL);
  stats.stream = meta.value("stream", 0ULL);
  if (meta.contains("model")) stats.model = model_from_json(meta["model"]);
  stats.snapshot_only = j.value("snapshot_only", false);

  int max_deg = 0;
  for (const auto& cell : j.at("degree_hist")) max_deg = std::max(max_deg, cell.at(0).get<int>());
  stats.degree_hist.assign(static_cast<std::size_t>(max_deg) + 1, 0);
  for (const auto& cell : j.at("degree_hist"))
    stats.degree_hist[cell.at(0).get<std::size_t>()] = cell.at(1).get<std::int64_t>();
  stats.tail_counts.assign(stats.degree_hist.size(), 0);
  for (std::size_t k = stats.degree_hist.size() - 1; k-- > 0;)
    stats.tail_counts[k] = stats.tail_counts[k + 1] + stats.degree_hist[k + 1];

  if (!stats.snapshot_only) {
    stats.m_seq = j.at("m_seq").get<std::vector<std::int32_t>>();
    if (static_cast<std::int64_t>(stats.m_seq.size()) != stats.n)
      throw std::invalid_argument("m_seq length does not match n");
    stats.cum_edges.resize(stats.m_seq.size());
    std::int64_t acc = 0;
    int max_m = 0;
    for (std::size_t t = 0; t < stats.m_seq.size(); ++t) {
      acc += stats.m_seq[t];
      max_m = std::max(max_m, static_cast<int>(stats.m_seq[t]));
      stats.cum_edges[t] = acc;
    }
    std::vector<std::int64_t> m_hist(static_cast<std::size_t>(max_m) + 1, 0);
    for (std::int32_t m : stats.m_seq) ++m_hist[static_cast<std::size_t>(m)];
    ++m_hist[static_cast<std::size_t>(stats.m_seq[0])];
    stats.r_tail_counts.assign(static_cast<std::size_t>(max_m) + 1, 0);
    for (std::size_t k = stats.r_tail_counts.size() - 1; k-- > 0;)
      stats.r_tail_counts[k] = stats.r_tail_counts[k + 1] + m_hist[k + 1];
  }
  if (j.contains("history")) {
    std::vector<HistoryEntry> hist;
    for (const auto& e : j["history"])
      hist.push_back({e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>(), e.at(2).get<std::int32_t>()});
    stats.history = std::move(hist);
  }
  return stats;
}

std::string degree_histogram_csv(const EvolutionStats& stats) {
  std::string out = "k,N_k\n";
  for (std::size_t k = 1; k < stats.degree_hist.size(); ++k)
    if (stats.degree_hist[k] != 0)
      out += std::to_string(k) + "," + std::to_string(stats.degree_hist[k]) + "\n";
  return out;
}

std::string law_csv(const LimitLaw& law, int max_rows) {
  std::string out = "k,p_k,p_tail,q_k\n";
  const int hi = (max_rows > 0) ? std::min(max_rows, law.k_trunc()) : law.k_trunc();
  for (int k = 1; k <= hi; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    out += std::to_string(k) + "," + fmt_double(law.p[idx]) + "," + fmt_double(law.p_tail[idx]) +
           "," + fmt_double(law.q[idx]) + "\n";
  }
  return out;
}

json report_to_json(const EstimateReport& report) {
  json j{{"format", "pamle.estimate_report"},
         {"version", 1},
         {"library_version", pamle::kVersion},
         {"estimator", to_string(report.kind)},
         {"n", report.n},
         {"delta_hat", finite_or_null(report.delta_hat)},
         {"bracket", json::array({report.bracket_lo, report.bracket_hi})},
         {"converged", report.converged},
         {"boundary_hit", to_string(report.boundary)},
         {"observed_info", finite_or_null(report.observed_info)},
         {"score_at_estimate", finite_or_null(report.score_at_estimate)},
         {"iterations", report.iterations}};
  j["ci"] = report.ci ? json{{"lo", report.ci->lo}, {"hi", report.ci->hi}, {"alpha", report.ci->alpha}}
                      : json(nullptr);
  j["variance_estimate"] = report.variance_estimate ? json(*report.variance_estimate) : json(nullptr);
  if (report.tau_hat) j["tau_hat"] = *report.tau_hat;
  if (report.delta_hat_scaled) j["delta_hat_scaled"] = *report.delta_hat_scaled;
  if (report.mu_used) j["mu_used"] = *report.mu_used;
  return j;
}

json summary_to_json(const McSummary& summary) {
  json est = json::array();
  for (const auto& es : summary.per_estimator) {
    json e{{"estimator", to_string(es.kind)},
           {"count", es.count},
           {"failures", es.failures},
           {"boundary_hits", es.boundary_hits},
           {"min", es.min},
           {"median", es.median},
           {"mean", es.mean},
           {"max", es.max},
           {"bias", es.bias},
           {"mse", es.mse}};
    e["sample_variance"] = es.sample_variance ? json(*es.sample_variance) : json(nullptr);
    e["predicted_variance"] = es.predicted_variance ? json(*es.predicted_variance) : json(nullptr);
    e["coverage"] = es.ci_covered
                        ? json{{"covered", *es.ci_covered}, {"total", es.ci_total}}
                        : json(nullptr);
    e["overlay_asymptotic"] =
        es.overlay_asymptotic
            ? json{{"mean", es.overlay_asymptotic->mean}, {"variance", es.overlay_asymptotic->variance}}
            : json(nullptr);
    e["overlay_bestfit"] =
        es.overlay_bestfit
            ? json{{"mean", es.overlay_bestfit->mean}, {"variance", es.overlay_bestfit->variance}}
            : json(nullptr);
    est.push_back(std::move(e));
  }
  json fails = json::array();
  for (const auto& f : summary.failures)
    fails.push_back(json{{"replicate", f.replicate},
                         {"estimator", to_string(f.kind)},
                         {"message", f.message},
                         {"seed", f.seed},
                         {"stream", f.stream}});
  return json{{"format", "pamle.mc_summary"}, {"version", 1},
              {"library_version", pamle::kVersion}, {"replicates", summary.replicates},
              {"true_delta", summary.true_delta},  {"base_seed", summary.base_seed},
              {"estimators", est},                 {"failures", fails}};
}

std::string estimates_csv(const McSummary& summary) {
  std::string out = "replicate,estimator,delta_hat,ci_lo,ci_hi,converged\n";
  for (const auto& row : summary.rows) {
    const EstimateReport& r = row.report;
    out += std::to_string(row.replicate);
    out += ",";
    out += to_string(r.kind);
    out += ",";
    out += fmt_double(r.delta_hat);
    out += ",";
    if (r.ci) out += fmt_double(r.ci->lo);
    out += ",";
    if (r.ci) out += fmt_double(r.ci->hi);
    out += ",";
    out += r.converged ? "1" : "0";
    out += "\n";
  }
  return out;
}

std::string histogram_csv(const EstimatorSummary& summary) {
  std::string out = "bin_lo,bin_hi,count,normal_asymptotic,normal_bestfit\n";
  for (const auto& bin : summary.histogram) {
    out += fmt_double(bin.lo);
    out += ",";
    out += fmt_double(bin.hi);
    out += ",";
    out += std::to_string(bin.count);
    out += ",";
    out += fmt_double(bin.expected_asymptotic);
    out += ",";
    out += fmt_double(bin.expected_bestfit);
    out += "\n";
  }
  return out;
}

json make_manifest(const std::string& subcommand, const json& resolved_config,
                   const std::vector<std::string>& outputs) {
  return json{{"format", "pamle.run_manifest"},
              {"version", 1},
              {"library_version", pamle::kVersion},
              {"subcommand", subcommand},
              {"created_utc", utc_now_iso8601()},
              {"config", resolved_config},
              {"outputs", outputs}};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::filesystem::path& path) {
  return json::parse(read_text_file(path));
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    return (from == std::string::npos) ? std::string{} : s.substr(from, to - from + 1);
  };
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(path.string() + ": empty key");
    out[key] = value;
  }
  return out;
}

}  // namespace pamle::io
