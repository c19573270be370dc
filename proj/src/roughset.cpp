#include "skyrank/roughset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <fmt/core.h>

namespace skyrank {

std::string_view to_string(BinScheme scheme) { return scheme == BinScheme::Uniform ? "uniform" : "quantile"; }

BinScheme parse_bin_scheme(std::string_view text) {
    if (text == "uniform") {
        return BinScheme::Uniform;
    }
    if (text == "quantile") {
        return BinScheme::Quantile;
    }
    throw std::invalid_argument(fmt::format("unknown bin scheme '{}'", text));
}

std::vector<std::uint32_t> discretize(std::span<const double> plane, std::uint32_t bins, BinScheme scheme) {
    if (bins < 2) {
        throw std::invalid_argument("discretize: at least two bins required");
    }
    std::vector<std::uint32_t> out(plane.size(), 0);
    if (plane.empty()) {
        return out;
    }
    const auto [lo_it, hi_it] = std::minmax_element(plane.begin(), plane.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    if (!(hi > lo)) {
        return out;
    }

    if (scheme == BinScheme::Uniform) {
        const double range = hi - lo;
        const double scale = static_cast<double>(bins);
        for (std::size_t k = 0; k < plane.size(); ++k) {
            const double t = (plane[k] - lo) / range;
            const auto b = static_cast<std::uint32_t>(std::max(0.0, std::floor(scale * t)));
            out[k] = std::min(b, bins - 1);
        }
        return out;
    }

    std::vector<double> sorted(plane.begin(), plane.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> edges(bins - 1);
    for (std::uint32_t k = 1; k < bins; ++k) {
        edges[k - 1] = sorted[(static_cast<std::size_t>(k) * n) / bins];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::uint32_t>(std::upper_bound(edges.begin(), edges.end(), plane[i]) - edges.begin());
    }
    return out;
}

DecisionTable::DecisionTable(std::size_t attributes, std::uint32_t bins, std::vector<std::uint32_t> condition,
                             std::vector<std::uint8_t> decision)
    : attributes_(attributes), bins_(bins), condition_(std::move(condition)), decision_(std::move(decision)) {
    if (attributes_ == 0 || bins_ == 0) {
        throw std::invalid_argument("decision table needs at least one attribute and one bin");
    }
    if (condition_.size() != decision_.size() * attributes_) {
        throw std::invalid_argument("decision table: condition matrix does not match row count");
    }
    if (std::any_of(condition_.begin(), condition_.end(), [this](std::uint32_t v) { return v >= bins_; })) {
        throw std::invalid_argument("decision table: bin index out of range");
    }
    if (std::any_of(decision_.begin(), decision_.end(), [](std::uint8_t v) { return v > kCloud; })) {
        throw std::invalid_argument("decision table: decision values must be 0 or 1");
    }
}

DecisionTable DecisionTable::from_channels(const ChannelStack& stack, std::span<const std::uint8_t> mask,
                                           std::uint32_t bins, BinScheme scheme) {
    const std::size_t n = stack.pixel_count();
    if (mask.size() != n) {
        throw std::invalid_argument("decision table: mask size differs from channel planes");
    }
    std::vector<std::uint32_t> condition(n * kChannelCount);
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        const auto column = discretize(stack.plane(j), bins, scheme);
        for (std::size_t k = 0; k < n; ++k) {
            condition[k * kChannelCount + j] = column[k];
        }
    }
    return DecisionTable(kChannelCount, bins, std::move(condition), std::vector<std::uint8_t>(mask.begin(), mask.end()));
}

Partition indiscernibility_partition(const DecisionTable& table, std::span<const std::size_t> attrs) {
    if (attrs.empty()) {
        throw std::invalid_argument("indiscernibility_partition: attribute set is empty");
    }
    for (const auto a : attrs) {
        if (a >= table.attributes()) {
            throw std::invalid_argument(fmt::format("indiscernibility_partition: attribute {} out of range", a));
        }
    }

    // Refine one attribute at a time: the class of a row under attrs[0..i] is keyed by
    // (class under attrs[0..i-1], bin on attrs[i]). Ids follow first occurrence in row order.
    const std::size_t n = table.rows();
    std::vector<std::uint64_t> class_of(n, 0);
    std::size_t class_count = n > 0 ? 1 : 0;
    std::unordered_map<std::uint64_t, std::uint64_t> ids;
    for (const auto a : attrs) {
        ids.clear();
        ids.reserve(std::min<std::size_t>(n, class_count * table.bins()));
        for (std::size_t r = 0; r < n; ++r) {
            const std::uint64_t key = class_of[r] * table.bins() + table.at(r, a);
            const auto [it, inserted] = ids.try_emplace(key, ids.size());
            class_of[r] = it->second;
        }
        class_count = ids.size();
    }

    Partition p;
    p.universe = n;
    p.classes.resize(class_count);
    for (std::size_t r = 0; r < n; ++r) {
        p.classes[class_of[r]].push_back(static_cast<std::uint32_t>(r));
    }
    return p;
}

namespace {

std::vector<char> membership(const Partition& partition, const IndexSet& target) {
    std::vector<char> in(partition.universe, 0);
    for (const auto i : target) {
        if (i >= partition.universe) {
            throw std::invalid_argument(fmt::format("row index {} outside the universe of {}", i, partition.universe));
        }
        in[i] = 1;
    }
    return in;
}

template <typename Keep>
IndexSet union_of_classes(const Partition& partition, Keep keep) {
    IndexSet out;
    for (const auto& cls : partition.classes) {
        if (keep(cls)) {
            out.insert(out.end(), cls.begin(), cls.end());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

IndexSet lower_approximation(const Partition& partition, const IndexSet& target) {
    const auto in = membership(partition, target);
    return union_of_classes(partition, [&](const IndexSet& cls) {
        return std::all_of(cls.begin(), cls.end(), [&](std::uint32_t i) { return in[i] != 0; });
    });
}

IndexSet upper_approximation(const Partition& partition, const IndexSet& target) {
    const auto in = membership(partition, target);
    return union_of_classes(partition, [&](const IndexSet& cls) {
        return std::any_of(cls.begin(), cls.end(), [&](std::uint32_t i) { return in[i] != 0; });
    });
}

IndexSet decision_class(const DecisionTable& table, std::uint8_t label) {
    IndexSet out;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (table.decision(r) == label) {
            out.push_back(static_cast<std::uint32_t>(r));
        }
    }
    return out;
}

IndexSet positive_region(const DecisionTable& table, const Partition& partition) {
    const IndexSet cloud = lower_approximation(partition, decision_class(table, kCloud));
    const IndexSet sky = lower_approximation(partition, decision_class(table, kSky));
    IndexSet out;
    out.reserve(cloud.size() + sky.size());
    std::set_union(cloud.begin(), cloud.end(), sky.begin(), sky.end(), std::back_inserter(out));
    return out;
}

double dependency_degree(const DecisionTable& table, std::span<const std::size_t> attrs) {
    if (table.rows() == 0) {
        return 0.0;
    }
    const Partition partition = indiscernibility_partition(table, attrs);
    return static_cast<double>(positive_region(table, partition).size()) / static_cast<double>(table.rows());
}

double relevance(const DecisionTable& table, std::size_t channel) {
    const std::size_t attrs[] = {channel};
    return dependency_degree(table, attrs);
}

std::array<double, kChannelCount> sample_relevance(const ImageSample& sample, std::uint32_t bins,
                                                   BinScheme scheme) {
    const DecisionTable table = DecisionTable::from_channels(extract_channels(sample), sample.mask(), bins, scheme);
    std::array<double, kChannelCount> gamma{};
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        gamma[j] = relevance(table, j);
    }
    return gamma;
}

RelevanceResult dataset_relevance(const Dataset& dataset, std::uint32_t bins, BinScheme scheme) {
    RelevanceResult result;
    result.bins = bins;
    result.scheme = scheme;
    for (const auto& sample : dataset) {
        result.image_ids.push_back(sample.id());
        result.per_image.push_back(sample_relevance(sample, bins, scheme));
    }
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        double sum = 0.0;
        for (const auto& row : result.per_image) {
            sum += row[j];
        }
        result.average[j] = sum / static_cast<double>(result.per_image.size());
    }
    return result;
}

}  // namespace skyrank
