#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "pamle/degree_law.hpp"
#include "pamle/estimators.hpp"
#include "pamle/mc_lab.hpp"
#include "pamle/pa_sim.hpp"

namespace pamle::io {

using json = nlohmann::json;

json model_to_json(const InitialDegreeModel& model);
InitialDegreeModel model_from_json(const json& j);
InitialDegreeModel model_from_pmf_csv(const std::filesystem::path& path);

json stats_to_json(const EvolutionStats& stats);
EvolutionStats stats_from_json(const json& j);

std::string degree_histogram_csv(const EvolutionStats& stats);
std::string law_csv(const LimitLaw& law, int max_rows = 0);

json report_to_json(const EstimateReport& report);

json summary_to_json(const McSummary& summary);
std::string estimates_csv(const McSummary& summary);
std::string histogram_csv(const EstimatorSummary& summary);

json make_manifest(const std::string& subcommand, const json& resolved_config,
                   const std::vector<std::string>& outputs);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
json read_json_file(const std::filesystem::path& path);

/// Flat key = value text, '#' comments; keys mirror the CLI flag names.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

}  // namespace pamle::io
