#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skyrank/colorspace.hpp"
#include "skyrank/dataset.hpp"

namespace skyrank {

struct SplitPlan {
    std::uint64_t seed = 1;
    std::size_t repetitions = 50;
    std::size_t train_count = 15;
    std::size_t test_count = 17;

    bool operator==(const SplitPlan&) const = default;
};

/// Image indices into the dataset, each list sorted ascending.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;

    bool operator==(const Split&) const = default;
};

/// `repetitions` independent uniform train/test partitions of the images. Split r is drawn
/// from a generator seeded by (plan.seed, r). Throws std::invalid_argument when
/// dataset_size != train_count + test_count or either count is zero.
std::vector<Split> make_splits(std::size_t dataset_size, const SplitPlan& plan);

/// Linear max-margin classifier on one scalar feature: cloud iff weight*x + bias > 0.
struct ScalarMarginModel {
    double weight = 0.0;
    double bias = 0.0;

    bool predicts_cloud(double x) const { return weight * x + bias > 0.0; }
    /// Feature value where the decision flips (-bias/weight); NaN when weight == 0.
    double threshold() const;

    bool operator==(const ScalarMarginModel&) const = default;
};

/// Minimizes 0.5*w^2 + c_reg * sum(hinge(1 - y*(w*z + b))) over (w, b), y = +1 for cloud,
/// on the z-scored feature, then maps the model back to raw feature units. Exact in b for
/// each w (bisection on the subgradient) and golden-section search in w, with fixed
/// iteration budgets so the result is deterministic. Throws std::invalid_argument when
/// only one class is present or c_reg <= 0.
ScalarMarginModel train_scalar_margin(std::span<const double> features, std::span<const std::uint8_t> labels,
                                      double c_reg);

/// Confusion counts with cloud as the positive class.
struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    double accuracy() const;
    double precision() const;  // 0 when nothing is predicted cloud
    double recall() const;     // 0 when there are no cloud pixels
    double f_score() const;    // 0 when precision + recall == 0

    bool operator==(const Confusion&) const = default;
};

struct SplitOutcome {
    Confusion counts;
    ScalarMarginModel model;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;

    bool operator==(const SplitOutcome&) const = default;
};

/// Boxplot statistics; quantiles use linear interpolation between order statistics.
struct MetricSummary {
    double median = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;

    bool operator==(const MetricSummary&) const = default;
};

MetricSummary summarize(std::span<const double> values);

struct ChannelMetrics {
    std::size_t channel = 0;
    std::vector<SplitOutcome> splits;

    std::vector<double> accuracy() const;
    std::vector<double> precision() const;
    std::vector<double> recall() const;
    std::vector<double> f_score() const;

    bool operator==(const ChannelMetrics&) const = default;
};

struct EvaluateOptions {
    double c_reg = 1.0;
    std::size_t subsample_cap = 100000;
};

struct ClassificationMetrics {
    SplitPlan plan;
    EvaluateOptions options;
    std::vector<ChannelMetrics> channels;  // indexed by channel

    /// Per-channel mean accuracy over all splits.
    std::array<double, kChannelCount> mean_accuracy() const;
    /// Per-channel median accuracy over all splits.
    std::array<double, kChannelCount> median_accuracy() const;
};

/// Train on (a seeded subsample of) the pooled training-image pixels of one channel, then
/// classify every test-image pixel and pool the confusion counts, once per split.
ChannelMetrics evaluate(const Dataset& dataset, const SplitPlan& plan, std::size_t channel,
                        const EvaluateOptions& options = {});

/// evaluate() for all 16 channels.
ClassificationMetrics evaluate_all(const Dataset& dataset, const SplitPlan& plan, const EvaluateOptions& options = {});

}  // namespace skyrank
