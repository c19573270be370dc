#include "skyrank/report.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#include "skyrank/io.hpp"

using json = nlohmann::json;

namespace skyrank {

std::optional<double> pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson: vectors differ in length");
    }
    std::vector<double> a, b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] && y[i] && std::isfinite(*x[i]) && std::isfinite(*y[i])) {
            a.push_back(*x[i]);
            b.push_back(*y[i]);
        }
    }
    if (a.size() < 3) {
        return std::nullopt;
    }
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        return std::nullopt;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    std::vector<std::optional<double>> a(x.begin(), x.end());
    std::vector<std::optional<double>> b(y.begin(), y.end());
    return pearson(std::span<const std::optional<double>>(a), std::span<const std::optional<double>>(b));
}

std::vector<std::size_t> rank_channels(const ChannelScores& scores) {
    std::vector<std::size_t> present, missing;
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        (scores.scores[j] ? present : missing).push_back(j);
    }
    const bool higher = scores.direction == Direction::HigherBetter;
    std::stable_sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
        return higher ? *scores.scores[a] > *scores.scores[b] : *scores.scores[a] < *scores.scores[b];
    });
    present.insert(present.end(), missing.begin(), missing.end());
    return present;
}

const MethodCorrelation* CorrelationReport::find(Method method) const {
    for (const auto& m : methods) {
        if (m.scores.method == method) {
            return &m;
        }
    }
    return nullptr;
}

CorrelationReport build_report(const RelevanceResult& relevance, std::span<const ChannelScores> baselines,
                               const ClassificationMetrics& metrics) {
    if (metrics.channels.size() != kChannelCount) {
        throw std::invalid_argument(
            fmt::format("build_report: classification metrics cover {} channels, expected {}", metrics.channels.size(),
                        kChannelCount));
    }
    CorrelationReport report;
    report.mean_accuracy = metrics.mean_accuracy();
    report.median_accuracy = metrics.median_accuracy();

    std::vector<ChannelScores> all{relevance_scores(relevance)};
    all.insert(all.end(), baselines.begin(), baselines.end());

    std::array<std::optional<double>, kChannelCount> accuracy{};
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        accuracy[j] = report.mean_accuracy[j];
    }

    std::optional<double> best;
    for (auto& scores : all) {
        MethodCorrelation m;
        m.pearson_r = pearson(scores.scores, accuracy);
        if (m.pearson_r) {
            m.oriented_r = scores.direction == Direction::HigherBetter ? *m.pearson_r : -*m.pearson_r;
        }
        m.ranking = rank_channels(scores);
        for (std::size_t j = 0; j < kChannelCount; ++j) {
            if (!scores.scores[j]) {
                m.missing.push_back(j);
            }
        }
        if (m.oriented_r && (!best || *m.oriented_r > *best)) {
            best = m.oriented_r;
            report.best_method = scores.method;
        }
        m.scores = std::move(scores);
        report.methods.push_back(std::move(m));
    }

    report.metadata = {
        {"accuracy_aggregate", "mean over splits"},
        {"test_metric_pooling", "confusion counts pooled over all test-image pixels per split"},
        {"positive_class", "cloud"},
        {"relevance", {{"bins", relevance.bins}, {"scheme", std::string(to_string(relevance.scheme))}}},
        {"split_plan", io::to_json(metrics.plan)},
        {"c_reg", metrics.options.c_reg},
        {"subsample_cap", metrics.options.subsample_cap},
        {"correlation", "signed Pearson r against mean accuracy; oriented_r flips lower-better methods"},
    };
    return report;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> number_or_empty(const json& v) {
    return v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
}

json channel_names(const std::vector<std::size_t>& channels) {
    json out = json::array();
    for (const auto c : channels) {
        out.push_back(std::string(channel_name(c)));
    }
    return out;
}

std::vector<std::size_t> channels_from_names(const json& names) {
    std::vector<std::size_t> out;
    for (const auto& n : names) {
        out.push_back(io::parse_channel_name(n.get<std::string>()));
    }
    return out;
}

}  // namespace

json to_json(const CorrelationReport& report) {
    json methods = json::array();
    for (const auto& m : report.methods) {
        methods.push_back({
            {"scores", io::to_json(m.scores)},
            {"pearson_r", optional_number(m.pearson_r)},
            {"oriented_r", optional_number(m.oriented_r)},
            {"ranking", channel_names(m.ranking)},
            {"missing", channel_names(m.missing)},
        });
    }
    return {
        {"mean_accuracy", report.mean_accuracy},
        {"median_accuracy", report.median_accuracy},
        {"methods", methods},
        {"best_method", report.best_method ? json(std::string(to_string(*report.best_method))) : json(nullptr)},
        {"metadata", report.metadata},
    };
}

CorrelationReport report_from_json(const json& doc) {
    CorrelationReport report;
    report.mean_accuracy = doc.at("mean_accuracy").get<std::array<double, kChannelCount>>();
    report.median_accuracy = doc.at("median_accuracy").get<std::array<double, kChannelCount>>();
    for (const auto& m : doc.at("methods")) {
        MethodCorrelation mc;
        mc.scores = io::scores_from_json(m.at("scores"));
        mc.pearson_r = number_or_empty(m.at("pearson_r"));
        mc.oriented_r = number_or_empty(m.at("oriented_r"));
        mc.ranking = channels_from_names(m.at("ranking"));
        mc.missing = channels_from_names(m.at("missing"));
        report.methods.push_back(std::move(mc));
    }
    if (!doc.at("best_method").is_null()) {
        report.best_method = parse_method(doc.at("best_method").get<std::string>());
    }
    report.metadata = doc.at("metadata");
    return report;
}

void write_report_files(const CorrelationReport& report, const std::filesystem::path& dir, const std::string& header) {
    std::filesystem::create_directories(dir);
    io::write_text(dir / "report.json", to_json(report).dump(2) + "\n");

    std::string ranking = fmt::format("# {}\nrank", header);
    for (const auto& m : report.methods) {
        ranking += fmt::format(",{}", to_string(m.scores.method));
    }
    ranking += "\n";
    for (std::size_t r = 0; r < kChannelCount; ++r) {
        ranking += std::to_string(r + 1);
        for (const auto& m : report.methods) {
            ranking += fmt::format(",{}", channel_name(m.ranking[r]));
        }
        ranking += "\n";
    }
    io::write_text(dir / "ranking.csv", ranking);

    for (const auto& m : report.methods) {
        std::string scatter = fmt::format("# {}\nchannel,label,score,mean_accuracy\n", header);
        for (std::size_t j = 0; j < kChannelCount; ++j) {
            scatter += fmt::format("{},{},{},{}\n", channel_name(j), channel_label(j),
                                   m.scores.scores[j] ? io::format_double(*m.scores.scores[j]) : "",
                                   io::format_double(report.mean_accuracy[j]));
        }
        io::write_text(dir / fmt::format("scatter_{}.csv", to_string(m.scores.method)), scatter);
    }
}

}  // namespace skyrank
