#include "skyrank/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/core.h>

namespace skyrank {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Relevance: return "relevance";
        case Method::Pbi: return "pbi";
        case Method::Pca: return "pca";
        case Method::Roc: return "roc";
        case Method::Kl: return "kl";
    }
    return "unknown";
}

std::string_view to_string(Direction direction) {
    return direction == Direction::HigherBetter ? "higher-better" : "lower-better";
}

Method parse_method(std::string_view text) {
    for (const Method m : {Method::Relevance, Method::Pbi, Method::Pca, Method::Roc, Method::Kl}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    throw std::invalid_argument(fmt::format("unknown method '{}'", text));
}

Direction parse_direction(std::string_view text) {
    if (text == "higher-better") {
        return Direction::HigherBetter;
    }
    if (text == "lower-better") {
        return Direction::LowerBetter;
    }
    throw std::invalid_argument(fmt::format("unknown direction '{}'", text));
}

std::string_view to_string(PbiVariant variant) {
    return variant == PbiVariant::Pearson ? "pearson" : "coefficient";
}

PbiVariant parse_pbi_variant(std::string_view text) {
    if (text == "pearson") {
        return PbiVariant::Pearson;
    }
    if (text == "coefficient") {
        return PbiVariant::Coefficient;
    }
    throw std::invalid_argument(fmt::format("unknown bimodality variant '{}'", text));
}

Direction default_direction(Method method, PbiVariant variant) {
    switch (method) {
        case Method::Pbi:
            return variant == PbiVariant::Pearson ? Direction::LowerBetter : Direction::HigherBetter;
        case Method::Kl:
            return Direction::LowerBetter;
        default:
            return Direction::HigherBetter;
    }
}

std::optional<double> pbi(std::span<const double> values) {
    if (values.size() < 4) {
        throw std::invalid_argument("pbi: at least 4 values required");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) {
        return std::nullopt;
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) {
        return std::nullopt;
    }
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    return kurt / (1.0 + skew * skew);
}

std::optional<double> bimodality_coefficient(std::span<const double> values) {
    const auto p = pbi(values);
    if (!p || !(*p > 0.0)) {
        return std::nullopt;
    }
    return 1.0 / *p;
}

std::array<double, kChannelCount> pca_loading(const ChannelStack& stack) {
    const std::size_t n = stack.pixel_count();
    if (n < kChannelCount + 1) {
        throw std::invalid_argument(fmt::format("pca_loading: {} pixels, at least {} required", n, kChannelCount + 1));
    }
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kChannelCount));
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        const auto plane = stack.plane(j);
        const auto col = static_cast<Eigen::Index>(j);
        const auto [lo, hi] = std::minmax_element(plane.begin(), plane.end());
        if (!(*hi > *lo)) {
            z.col(col).setZero();
            continue;
        }
        const double mean = std::accumulate(plane.begin(), plane.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (const double v : plane) {
            var += (v - mean) * (v - mean);
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        for (std::size_t k = 0; k < n; ++k) {
            z(static_cast<Eigen::Index>(k), col) = (plane[k] - mean) / sd;
        }
    }
    const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("pca_loading: eigen decomposition failed");
    }
    // Eigenvalues come back in increasing order.
    const Eigen::VectorXd leading = solver.eigenvectors().col(static_cast<Eigen::Index>(kChannelCount) - 1);
    std::array<double, kChannelCount> loading{};
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        loading[j] = std::abs(leading(static_cast<Eigen::Index>(j)));
    }
    return loading;
}

std::optional<double> roc_auc(std::span<const double> values, std::span<const std::uint8_t> labels) {
    if (values.size() != labels.size()) {
        throw std::invalid_argument("roc_auc: values and labels differ in length");
    }
    const std::size_t n = values.size();
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kCloud));
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        return std::nullopt;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    // Sum of 1-based mid-ranks of the positive samples.
    double positive_rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        std::size_t tied_positives = 0;
        while (j < n && values[order[j]] == values[order[i]]) {
            tied_positives += labels[order[j]] == kCloud ? 1 : 0;
            ++j;
        }
        const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
        positive_rank_sum += mid_rank * static_cast<double>(tied_positives);
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double kl_score(std::span<const double> values, std::span<const std::uint8_t> labels, std::uint32_t bins,
                double alpha) {
    if (values.size() != labels.size()) {
        throw std::invalid_argument("kl_score: values and labels differ in length");
    }
    if (bins < 2) {
        throw std::invalid_argument("kl_score: at least two bins required");
    }
    if (values.empty()) {
        return 0.0;
    }
    std::vector<double> channel(bins, 0.0);
    std::vector<double> truth(bins, 0.0);
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    const double scale = static_cast<double>(bins);
    for (std::size_t k = 0; k < values.size(); ++k) {
        std::uint32_t b = 0;
        if (range > 0.0) {
            b = std::min(static_cast<std::uint32_t>(std::floor(scale * (values[k] - lo) / range)), bins - 1);
        }
        channel[b] += 1.0;
        truth[labels[k] == kCloud ? bins - 1 : 0] += 1.0;
    }
    auto normalize = [&](std::vector<double>& h) {
        const double n = static_cast<double>(values.size());
        double total = 0.0;
        for (auto& v : h) {
            v = v / n + alpha;
            total += v;
        }
        for (auto& v : h) {
            v /= total;
        }
    };
    normalize(channel);
    normalize(truth);
    double d = 0.0;
    for (std::uint32_t b = 0; b < bins; ++b) {
        d += channel[b] * std::log(channel[b] / truth[b]);
    }
    // Rounding can leave a tiny negative value for identical histograms.
    return std::max(d, 0.0);
}

namespace {

struct RunningMean {
    std::array<double, kChannelCount> sum{};
    std::array<std::size_t, kChannelCount> count{};

    void add(std::size_t j, std::optional<double> v) {
        if (v && std::isfinite(*v)) {
            sum[j] += *v;
            ++count[j];
        }
    }

    std::array<std::optional<double>, kChannelCount> finish() const {
        std::array<std::optional<double>, kChannelCount> out{};
        for (std::size_t j = 0; j < kChannelCount; ++j) {
            if (count[j] > 0) {
                out[j] = sum[j] / static_cast<double>(count[j]);
            }
        }
        return out;
    }
};

}  // namespace

std::vector<ChannelScores> compute_baselines(const Dataset& dataset, std::span<const Method> methods,
                                             const BaselineOptions& options) {
    for (const Method m : methods) {
        if (m == Method::Relevance) {
            throw std::invalid_argument("compute_baselines: relevance is not a baseline method");
        }
    }
    std::vector<RunningMean> acc(methods.size());
    for (const auto& sample : dataset) {
        const ChannelStack stack = extract_channels(sample);
        const auto labels = sample.mask();
        for (std::size_t m = 0; m < methods.size(); ++m) {
            switch (methods[m]) {
                case Method::Pbi:
                    for (std::size_t j = 0; j < kChannelCount; ++j) {
                        acc[m].add(j, options.pbi_variant == PbiVariant::Pearson
                                          ? pbi(stack.plane(j))
                                          : bimodality_coefficient(stack.plane(j)));
                    }
                    break;
                case Method::Pca: {
                    const auto loading = pca_loading(stack);
                    for (std::size_t j = 0; j < kChannelCount; ++j) {
                        acc[m].add(j, loading[j]);
                    }
                    break;
                }
                case Method::Roc:
                    for (std::size_t j = 0; j < kChannelCount; ++j) {
                        const auto auc = roc_auc(stack.plane(j), labels);
                        acc[m].add(j, auc ? std::optional<double>(std::max(*auc, 1.0 - *auc)) : std::nullopt);
                    }
                    break;
                case Method::Kl:
                    for (std::size_t j = 0; j < kChannelCount; ++j) {
                        acc[m].add(j, kl_score(stack.plane(j), labels, options.kl_bins));
                    }
                    break;
                case Method::Relevance:
                    break;
            }
        }
    }

    std::vector<ChannelScores> out;
    for (std::size_t m = 0; m < methods.size(); ++m) {
        ChannelScores s;
        s.method = methods[m];
        s.direction = default_direction(methods[m], options.pbi_variant);
        if (methods[m] == Method::Pbi) {
            s.variant = std::string(to_string(options.pbi_variant));
        } else if (methods[m] == Method::Kl) {
            s.variant = fmt::format("bins={}", options.kl_bins);
        }
        s.scores = acc[m].finish();
        out.push_back(std::move(s));
    }
    return out;
}

ChannelScores relevance_scores(const RelevanceResult& result) {
    ChannelScores s;
    s.method = Method::Relevance;
    s.direction = Direction::HigherBetter;
    s.variant = fmt::format("{}:{}", to_string(result.scheme), result.bins);
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        s.scores[j] = result.average[j];
    }
    return s;
}

}  // namespace skyrank
