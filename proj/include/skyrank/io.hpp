#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skyrank/baselines.hpp"
#include "skyrank/classifier.hpp"
#include "skyrank/roughset.hpp"

// JSON and CSV forms of the stage artifacts. CSV files begin with one '#' comment line
// carrying the run configuration.
namespace skyrank::io {

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

std::size_t parse_channel_name(const std::string& name);

nlohmann::json to_json(const ChannelScores& scores);
ChannelScores scores_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const RelevanceResult& result);
RelevanceResult relevance_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const ClassificationMetrics& metrics);
ClassificationMetrics metrics_from_json(const nlohmann::json& doc);

/// Writes text to path, throwing DataError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
/// Reads and parses a JSON file, throwing DataError naming the path when missing or malformed.
nlohmann::json read_json(const std::filesystem::path& path);

/// Rows = images (id, c1..c16).
std::string relevance_per_image_csv(const RelevanceResult& result, const std::string& header);
/// One row of averages.
std::string relevance_average_csv(const RelevanceResult& result, const std::string& header);
/// One row per method: method, direction, c1..c16 (empty cell for a missing score).
std::string baselines_csv(const std::vector<ChannelScores>& scores, const std::string& header);
/// One row per (channel, split): counts and metrics.
std::string metrics_csv(const ClassificationMetrics& metrics, const std::string& header);
/// One row per (channel, metric): median, q25, q75, min, max, mean.
std::string metrics_summary_csv(const ClassificationMetrics& metrics, const std::string& header);

}  // namespace skyrank::io
