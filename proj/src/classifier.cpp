#include "skyrank/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <fmt/core.h>

#include "skyrank/random.hpp"

namespace skyrank {

std::vector<Split> make_splits(std::size_t dataset_size, const SplitPlan& plan) {
    if (plan.repetitions == 0) {
        throw std::invalid_argument("split plan needs at least one repetition");
    }
    if (plan.train_count == 0 || plan.test_count == 0) {
        throw std::invalid_argument("split plan needs non-empty train and test sets");
    }
    if (plan.train_count + plan.test_count != dataset_size) {
        throw std::invalid_argument(fmt::format("split plan expects {} + {} = {} images, dataset has {}",
                                                plan.train_count, plan.test_count,
                                                plan.train_count + plan.test_count, dataset_size));
    }
    std::vector<Split> splits;
    splits.reserve(plan.repetitions);
    for (std::size_t r = 0; r < plan.repetitions; ++r) {
        Rng rng(derive_seed(plan.seed, r));
        std::vector<std::size_t> order(dataset_size);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = dataset_size - 1; i > 0; --i) {
            std::swap(order[i], order[rng.below(i + 1)]);
        }
        Split s;
        s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(plan.train_count));
        s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(plan.train_count), order.end());
        std::sort(s.train.begin(), s.train.end());
        std::sort(s.test.begin(), s.test.end());
        splits.push_back(std::move(s));
    }
    return splits;
}

double ScalarMarginModel::threshold() const {
    return weight != 0.0 ? -bias / weight : std::numeric_limits<double>::quiet_NaN();
}

namespace {

// Hinge objective over sorted positive and negative feature values, with prefix sums so
// that the loss and its b-subgradient cost O(log n) for any (w, b).
class HingeObjective {
public:
    HingeObjective(std::vector<double> pos, std::vector<double> neg, double c_reg)
        : pos_(std::move(pos)), neg_(std::move(neg)), c_(c_reg) {
        std::sort(pos_.begin(), pos_.end());
        std::sort(neg_.begin(), neg_.end());
        pos_prefix_ = prefix(pos_);
        neg_prefix_ = prefix(neg_);
    }

    // Terms max(0, 1 - w*x - b) over positives.
    double positive_loss(double w, double b, std::size_t* active) const {
        const double s = 1.0 - b;
        std::size_t lo = 0, hi = 0;  // active range [lo, hi)
        if (w > 0.0) {
            hi = lower_index(pos_, s / w);
        } else if (w < 0.0) {
            lo = upper_index(pos_, s / w);
            hi = pos_.size();
        } else {
            hi = s > 0.0 ? pos_.size() : 0;
        }
        *active = hi - lo;
        return static_cast<double>(hi - lo) * s - w * (pos_prefix_[hi] - pos_prefix_[lo]);
    }

    // Terms max(0, 1 + w*x + b) over negatives.
    double negative_loss(double w, double b, std::size_t* active) const {
        const double s = 1.0 + b;
        std::size_t lo = 0, hi = 0;
        if (w > 0.0) {
            lo = upper_index(neg_, -s / w);
            hi = neg_.size();
        } else if (w < 0.0) {
            hi = lower_index(neg_, -s / w);
        } else {
            hi = s > 0.0 ? neg_.size() : 0;
        }
        *active = hi - lo;
        return static_cast<double>(hi - lo) * s + w * (neg_prefix_[hi] - neg_prefix_[lo]);
    }

    double value(double w, double b) const {
        std::size_t a = 0, c = 0;
        return 0.5 * w * w + c_ * (positive_loss(w, b, &a) + negative_loss(w, b, &c));
    }

    // Slope of the loss in b, up to the positive factor c_reg.
    double b_slope(double w, double b) const {
        std::size_t active_pos = 0, active_neg = 0;
        positive_loss(w, b, &active_pos);
        negative_loss(w, b, &active_neg);
        return static_cast<double>(active_neg) - static_cast<double>(active_pos);
    }

    // argmin over b for fixed w. The loss is convex piecewise linear in b with kinks at
    // 1 - w*x (positives) and -1 - w*x (negatives); bisect on the sign of the slope.
    double best_bias(double w) const {
        const double wp_lo = std::min(w * pos_.front(), w * pos_.back());
        const double wp_hi = std::max(w * pos_.front(), w * pos_.back());
        const double wn_lo = std::min(w * neg_.front(), w * neg_.back());
        const double wn_hi = std::max(w * neg_.front(), w * neg_.back());
        double lo = std::min(1.0 - wp_hi, -1.0 - wn_hi);
        double hi = std::max(1.0 - wp_lo, -1.0 - wn_lo);
        for (int it = 0; it < kBisectionSteps; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (b_slope(w, mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }

    double profile(double w) const { return value(w, best_bias(w)); }

    double zero_weight_bound() const {
        // With w = 0 the best hinge total is 2*min(P, N); the optimal w satisfies 0.5 w^2 <= that.
        const double g0 = c_ * 2.0 * static_cast<double>(std::min(pos_.size(), neg_.size()));
        return std::sqrt(2.0 * g0) + 1.0;
    }

    static constexpr int kBisectionSteps = 120;

private:
    static std::vector<double> prefix(const std::vector<double>& v) {
        std::vector<double> p(v.size() + 1, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            p[i + 1] = p[i] + v[i];
        }
        return p;
    }
    static std::size_t lower_index(const std::vector<double>& v, double t) {
        return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), t) - v.begin());
    }
    static std::size_t upper_index(const std::vector<double>& v, double t) {
        return static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), t) - v.begin());
    }

    std::vector<double> pos_;
    std::vector<double> neg_;
    std::vector<double> pos_prefix_;
    std::vector<double> neg_prefix_;
    double c_;
};

constexpr int kGoldenSteps = 120;

}  // namespace

ScalarMarginModel train_scalar_margin(std::span<const double> features, std::span<const std::uint8_t> labels,
                                      double c_reg) {
    if (features.size() != labels.size()) {
        throw std::invalid_argument("train_scalar_margin: features and labels differ in length");
    }
    if (!(c_reg > 0.0)) {
        throw std::invalid_argument("train_scalar_margin: c_reg must be positive");
    }
    const std::size_t n = features.size();
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kCloud));
    if (positives == 0 || positives == n) {
        throw std::invalid_argument("train_scalar_margin: training data must contain both classes");
    }

    const double mean = std::accumulate(features.begin(), features.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (const double x : features) {
        var += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double scale = sd > 0.0 ? sd : 1.0;

    std::vector<double> pos, neg;
    pos.reserve(positives);
    neg.reserve(n - positives);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (features[i] - mean) / scale;
        (labels[i] == kCloud ? pos : neg).push_back(z);
    }
    const HingeObjective objective(std::move(pos), std::move(neg), c_reg);

    double w = 0.0;
    if (sd > 0.0) {
        // Golden-section search; the profile over w is convex.
        constexpr double inv_phi = 0.6180339887498949;
        double a = -objective.zero_weight_bound();
        double b = objective.zero_weight_bound();
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = objective.profile(x1);
        double f2 = objective.profile(x2);
        for (int it = 0; it < kGoldenSteps; ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = objective.profile(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = objective.profile(x2);
            }
        }
        w = 0.5 * (a + b);
        if (objective.profile(0.0) <= objective.profile(w)) {
            w = 0.0;
        }
    }
    const double bias = objective.best_bias(w);

    // Back to raw units: w*(x - mean)/scale + bias.
    ScalarMarginModel model;
    model.weight = w / scale;
    model.bias = bias - w * mean / scale;
    return model;
}

double Confusion::accuracy() const {
    const std::uint64_t total = tp + fp + tn + fn;
    return total > 0 ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
}

double Confusion::precision() const {
    return tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
}

double Confusion::recall() const {
    return tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
}

double Confusion::f_score() const {
    const double p = precision();
    const double r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

MetricSummary summarize(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("summarize: no values");
    }
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] + frac * (v[i + 1] - v[i]) : v[i];
    };
    MetricSummary s;
    s.median = quantile(0.5);
    s.q25 = quantile(0.25);
    s.q75 = quantile(0.75);
    s.min = v.front();
    s.max = v.back();
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    return s;
}

namespace {

template <typename Field>
std::vector<double> collect(const std::vector<SplitOutcome>& splits, Field field) {
    std::vector<double> out;
    out.reserve(splits.size());
    for (const auto& s : splits) {
        out.push_back(s.*field);
    }
    return out;
}

// Floyd's algorithm: `count` distinct indices from [0, total), returned sorted.
std::vector<std::size_t> sample_without_replacement(std::size_t total, std::size_t count, Rng& rng) {
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(count * 2);
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t j = total - count; j < total; ++j) {
        const auto t = static_cast<std::size_t>(rng.below(j + 1));
        const std::size_t pick = chosen.insert(t).second ? t : j;
        if (pick == j) {
            chosen.insert(j);
        }
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end());
    return out;
}

ChannelMetrics evaluate_channel(const Dataset& dataset, const std::vector<Split>& splits, const SplitPlan& plan,
                                std::size_t channel, const EvaluateOptions& options) {
    std::vector<std::vector<double>> planes;
    planes.reserve(dataset.size());
    for (const auto& sample : dataset) {
        planes.push_back(extract_channel(sample, channel));
    }

    ChannelMetrics metrics;
    metrics.channel = channel;
    for (std::size_t r = 0; r < splits.size(); ++r) {
        const Split& split = splits[r];

        // Pooled training pixels, addressed by a global index over the train images.
        std::vector<std::size_t> offsets{0};
        for (const auto i : split.train) {
            offsets.push_back(offsets.back() + planes[i].size());
        }
        const std::size_t total = offsets.back();
        std::vector<double> features;
        std::vector<std::uint8_t> labels;
        auto take = [&](std::size_t global) {
            const auto pos = static_cast<std::size_t>(
                std::upper_bound(offsets.begin(), offsets.end(), global) - offsets.begin() - 1);
            const std::size_t image = split.train[pos];
            const std::size_t k = global - offsets[pos];
            features.push_back(planes[image][k]);
            labels.push_back(dataset[image].mask()[k]);
        };
        if (options.subsample_cap == 0 || total <= options.subsample_cap) {
            features.reserve(total);
            labels.reserve(total);
            for (std::size_t g = 0; g < total; ++g) {
                take(g);
            }
        } else {
            Rng rng(derive_seed(derive_seed(plan.seed, 0x7375627361ULL), r, channel));
            const auto picks = sample_without_replacement(total, options.subsample_cap, rng);
            features.reserve(picks.size());
            labels.reserve(picks.size());
            for (const auto g : picks) {
                take(g);
            }
        }

        SplitOutcome outcome;
        outcome.model = train_scalar_margin(features, labels, options.c_reg);
        for (const auto i : split.test) {
            const auto mask = dataset[i].mask();
            const auto& plane = planes[i];
            for (std::size_t k = 0; k < plane.size(); ++k) {
                const bool predicted = outcome.model.predicts_cloud(plane[k]);
                const bool actual = mask[k] == kCloud;
                if (predicted) {
                    ++(actual ? outcome.counts.tp : outcome.counts.fp);
                } else {
                    ++(actual ? outcome.counts.fn : outcome.counts.tn);
                }
            }
        }
        outcome.accuracy = outcome.counts.accuracy();
        outcome.precision = outcome.counts.precision();
        outcome.recall = outcome.counts.recall();
        outcome.f_score = outcome.counts.f_score();
        metrics.splits.push_back(outcome);
    }
    return metrics;
}

}  // namespace

std::vector<double> ChannelMetrics::accuracy() const { return collect(splits, &SplitOutcome::accuracy); }
std::vector<double> ChannelMetrics::precision() const { return collect(splits, &SplitOutcome::precision); }
std::vector<double> ChannelMetrics::recall() const { return collect(splits, &SplitOutcome::recall); }
std::vector<double> ChannelMetrics::f_score() const { return collect(splits, &SplitOutcome::f_score); }

std::array<double, kChannelCount> ClassificationMetrics::mean_accuracy() const {
    std::array<double, kChannelCount> out{};
    for (const auto& c : channels) {
        out.at(c.channel) = summarize(c.accuracy()).mean;
    }
    return out;
}

std::array<double, kChannelCount> ClassificationMetrics::median_accuracy() const {
    std::array<double, kChannelCount> out{};
    for (const auto& c : channels) {
        out.at(c.channel) = summarize(c.accuracy()).median;
    }
    return out;
}

ChannelMetrics evaluate(const Dataset& dataset, const SplitPlan& plan, std::size_t channel,
                        const EvaluateOptions& options) {
    if (channel >= kChannelCount) {
        throw std::out_of_range(fmt::format("channel index {} out of range", channel));
    }
    return evaluate_channel(dataset, make_splits(dataset.size(), plan), plan, channel, options);
}

ClassificationMetrics evaluate_all(const Dataset& dataset, const SplitPlan& plan, const EvaluateOptions& options) {
    const auto splits = make_splits(dataset.size(), plan);
    ClassificationMetrics out;
    out.plan = plan;
    out.options = options;
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        out.channels.push_back(evaluate_channel(dataset, splits, plan, j, options));
    }
    return out;
}

}  // namespace skyrank
