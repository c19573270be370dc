#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skyrank/baselines.hpp"
#include "skyrank/classifier.hpp"
#include "skyrank/roughset.hpp"

namespace skyrank {

/// Sample Pearson correlation over the pairs where both entries are present.
/// Empty when fewer than 3 pairs remain or either side has zero variance.
std::optional<double> pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y);
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Channel indices best-first under the method's direction; ties keep channel order and
/// channels with missing scores go last.
std::vector<std::size_t> rank_channels(const ChannelScores& scores);

struct MethodCorrelation {
    ChannelScores scores;
    std::optional<double> pearson_r;
    /// pearson_r for higher-better methods, -pearson_r for lower-better ones.
    std::optional<double> oriented_r;
    std::vector<std::size_t> ranking;
    std::vector<std::size_t> missing;

    bool operator==(const MethodCorrelation&) const = default;
};

struct CorrelationReport {
    /// Per-channel mean accuracy over all splits (the correlation target).
    std::array<double, kChannelCount> mean_accuracy{};
    std::array<double, kChannelCount> median_accuracy{};
    std::vector<MethodCorrelation> methods;
    /// Method with the largest oriented_r, if any correlation is defined.
    std::optional<Method> best_method;
    /// Free-form provenance (run configuration, aggregation choices).
    nlohmann::json metadata = nlohmann::json::object();

    const MethodCorrelation* find(Method method) const;

    bool operator==(const CorrelationReport&) const = default;
};

CorrelationReport build_report(const RelevanceResult& relevance, std::span<const ChannelScores> baselines,
                               const ClassificationMetrics& metrics);

nlohmann::json to_json(const CorrelationReport& report);
CorrelationReport report_from_json(const nlohmann::json& doc);

/// report.json, ranking.csv and one scatter_<method>.csv per method. `header` is written
/// as a leading '#' comment line in each CSV.
void write_report_files(const CorrelationReport& report, const std::filesystem::path& dir, const std::string& header);

}  // namespace skyrank
