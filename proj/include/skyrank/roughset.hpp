#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skyrank/colorspace.hpp"
#include "skyrank/dataset.hpp"

namespace skyrank {

enum class BinScheme { Uniform, Quantile };

std::string_view to_string(BinScheme scheme);
/// Accepts "uniform" or "quantile"; throws std::invalid_argument otherwise.
BinScheme parse_bin_scheme(std::string_view text);

/// Maps a continuous plane to bin indices in [0, bins).
///
/// Uniform: [min,max] split into equal intervals, bin = floor(bins*(v-min)/(max-min)) clamped.
/// Quantile: edges are the sample values at ranks floor(k*n/bins), k = 1..bins-1, and a value's
/// bin is the number of edges <= it. Edges are sample values, so the assignment depends only on
/// the ordering of the plane and is unchanged by strictly increasing transforms.
/// A constant plane maps to bin 0 under both schemes. Requires bins >= 2.
std::vector<std::uint32_t> discretize(std::span<const double> plane, std::uint32_t bins, BinScheme scheme);

/// Pixel-by-attribute matrix of bin indices plus the sky/cloud decision column.
class DecisionTable {
public:
    /// condition is row-major rows x attributes. Throws std::invalid_argument if a cell is
    /// >= bins or a decision value is not 0/1.
    DecisionTable(std::size_t attributes, std::uint32_t bins, std::vector<std::uint32_t> condition,
                  std::vector<std::uint8_t> decision);

    /// One attribute per color channel, each plane discretized independently.
    static DecisionTable from_channels(const ChannelStack& stack, std::span<const std::uint8_t> mask,
                                       std::uint32_t bins, BinScheme scheme);

    std::size_t rows() const { return decision_.size(); }
    std::size_t attributes() const { return attributes_; }
    std::uint32_t bins() const { return bins_; }
    std::uint32_t at(std::size_t row, std::size_t attribute) const { return condition_[row * attributes_ + attribute]; }
    std::uint8_t decision(std::size_t row) const { return decision_[row]; }
    std::span<const std::uint8_t> decisions() const { return decision_; }

private:
    std::size_t attributes_;
    std::uint32_t bins_;
    std::vector<std::uint32_t> condition_;
    std::vector<std::uint8_t> decision_;
};

/// Sorted, duplicate-free row indices.
using IndexSet = std::vector<std::uint32_t>;

/// Equivalence classes of an indiscernibility relation. Classes are ordered by their
/// smallest member and each class is sorted.
struct Partition {
    std::size_t universe = 0;
    std::vector<IndexSet> classes;

    bool operator==(const Partition&) const = default;
};

/// Rows share a class iff their bins agree on every attribute in attrs.
/// Throws std::invalid_argument on an empty or out-of-range attribute list.
Partition indiscernibility_partition(const DecisionTable& table, std::span<const std::size_t> attrs);

/// Union of the classes entirely contained in target.
IndexSet lower_approximation(const Partition& partition, const IndexSet& target);

/// Union of the classes that intersect target.
IndexSet upper_approximation(const Partition& partition, const IndexSet& target);

/// Rows carrying the given decision label.
IndexSet decision_class(const DecisionTable& table, std::uint8_t label);

/// Union of the lower approximations of the sky and cloud decision classes.
IndexSet positive_region(const DecisionTable& table, const Partition& partition);

/// |POS| / |U| for the attribute subset attrs.
double dependency_degree(const DecisionTable& table, std::span<const std::size_t> attrs);

/// Dependency of the decision on a single channel.
double relevance(const DecisionTable& table, std::size_t channel);

struct RelevanceResult {
    std::uint32_t bins = 0;
    BinScheme scheme = BinScheme::Quantile;
    std::vector<std::string> image_ids;
    std::vector<std::array<double, kChannelCount>> per_image;
    std::array<double, kChannelCount> average{};

    bool operator==(const RelevanceResult&) const = default;
};

/// Per-image relevance of every channel (one decision table per image, never pooled)
/// and the per-channel mean over images.
RelevanceResult dataset_relevance(const Dataset& dataset, std::uint32_t bins, BinScheme scheme);

/// Relevance of all 16 channels for one sample.
std::array<double, kChannelCount> sample_relevance(const ImageSample& sample, std::uint32_t bins,
                                                   BinScheme scheme);

}  // namespace skyrank
