#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skyrank/baselines.hpp"
#include "skyrank/roughset.hpp"

namespace skyrank {

/// Everything that determines a run. Embedded verbatim in every output file.
struct RunConfig {
    std::filesystem::path manifest;
    std::uint32_t bins = 32;
    BinScheme bin_scheme = BinScheme::Quantile;
    std::uint32_t kl_bins = 64;
    PbiVariant pbi_variant = PbiVariant::Pearson;
    std::uint64_t seed = 1;
    std::size_t repetitions = 50;
    std::size_t train_count = 15;
    std::size_t test_count = 17;
    double c_reg = 1.0;
    std::size_t subsample_cap = 100000;
    std::filesystem::path output_dir = "out";

    nlohmann::json to_json() const;
    /// Accepts a bare config object or any output document embedding one (including report.json).
    static RunConfig from_json(const nlohmann::json& doc);
    /// Throws std::invalid_argument when a numeric field is out of range.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// One-line form written at the top of every CSV.
std::string config_header(const RunConfig& config);

/// Per-image channel PNGs under <output_dir>/channels/<id>/.
void cmd_channels(const RunConfig& config);
/// relevance.json, relevance_per_image.csv, relevance_average.csv.
void cmd_relevance(const RunConfig& config);
/// baselines.json and baselines.csv for the given methods (all four when empty).
void cmd_baselines(const RunConfig& config, std::vector<Method> methods = {});
/// classify.json, metrics.csv, metrics_summary.csv.
void cmd_classify(const RunConfig& config);
/// Reads the three stage outputs from output_dir and writes the correlation report.
void cmd_report(const RunConfig& config);
/// Synthetic dataset (PNG pairs + manifest.json) under out.
std::filesystem::path cmd_synth(std::size_t n, std::uint64_t seed, std::size_t height, std::size_t width,
                                const std::filesystem::path& out);
/// relevance, baselines, classify and report in sequence.
void cmd_all(const RunConfig& config);

}  // namespace skyrank
