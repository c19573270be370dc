#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrank/colorspace.hpp"
#include "skyrank/dataset.hpp"
#include "skyrank/roughset.hpp"

namespace skyrank {

enum class Method { Relevance, Pbi, Pca, Roc, Kl };
enum class Direction { HigherBetter, LowerBetter };

std::string_view to_string(Method method);
std::string_view to_string(Direction direction);
Method parse_method(std::string_view text);
Direction parse_direction(std::string_view text);

/// Which bimodality statistic the "pbi" method reports.
enum class PbiVariant {
    Pearson,      // kurtosis / (1 + skewness^2); 1 is most bimodal, lower is better
    Coefficient,  // the reciprocal; 1 is most bimodal, higher is better
};

std::string_view to_string(PbiVariant variant);
PbiVariant parse_pbi_variant(std::string_view text);

/// Per-channel ranking scores of one method. A missing entry means the score was undefined
/// on every image (e.g. zero variance).
struct ChannelScores {
    Method method = Method::Relevance;
    Direction direction = Direction::HigherBetter;
    std::string variant;
    std::array<std::optional<double>, kChannelCount> scores{};

    bool operator==(const ChannelScores&) const = default;
};

Direction default_direction(Method method, PbiVariant variant = PbiVariant::Pearson);

/// Pearson bimodality index from population moments: kurtosis / (1 + skewness^2).
/// Empty when the sample has zero variance; throws std::invalid_argument below 4 values.
std::optional<double> pbi(std::span<const double> values);

/// Reciprocal of pbi (bimodality coefficient form).
std::optional<double> bimodality_coefficient(std::span<const double> values);

/// Absolute components of the leading eigenvector of the channel correlation matrix.
/// Constant channels contribute all-zero standardized columns. Needs at least 17 pixels.
std::array<double, kChannelCount> pca_loading(const ChannelStack& stack);

/// Mann-Whitney AUC with mid-ranks for ties: P(cloud value > sky value) + 0.5 P(tie).
/// Empty when only one label is present.
std::optional<double> roc_auc(std::span<const double> values, std::span<const std::uint8_t> labels);

inline constexpr double kKlSmoothing = 1e-6;

/// D_KL(channel histogram || label histogram) over `bins` shared bins after min-max
/// normalization of the channel; labels put their mass in the first and last bin.
double kl_score(std::span<const double> values, std::span<const std::uint8_t> labels, std::uint32_t bins,
                double alpha = kKlSmoothing);

struct BaselineOptions {
    std::uint32_t kl_bins = 64;
    PbiVariant pbi_variant = PbiVariant::Pearson;
};

/// Dataset-level scores for the requested baseline methods, each computed per image and
/// averaged over the images where it is defined. ROC is folded to max(AUC, 1 - AUC) per image.
std::vector<ChannelScores> compute_baselines(const Dataset& dataset, std::span<const Method> methods,
                                             const BaselineOptions& options = {});

/// Average relevance packaged as ChannelScores.
ChannelScores relevance_scores(const RelevanceResult& result);

}  // namespace skyrank
