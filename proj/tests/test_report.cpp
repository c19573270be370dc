#include <doctest.h>

#include <cmath>

#include "skyrank/baselines.hpp"
#include "skyrank/classifier.hpp"
#include "skyrank/random.hpp"
#include "skyrank/report.hpp"
#include "test_support.hpp"

using namespace skyrank;
using doctest::Approx;

namespace {

ChannelScores scores_of(Method method, Direction direction, const std::array<double, kChannelCount>& v) {
    ChannelScores s;
    s.method = method;
    s.direction = direction;
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        s.scores[j] = v[j];
    }
    return s;
}

struct SmallRun {
    RelevanceResult relevance;
    std::vector<ChannelScores> baselines;
    ClassificationMetrics metrics;
};

const SmallRun& small_run() {
    static const SmallRun run = [] {
        const Dataset d = synth_dataset(6, 11, 20, 20);
        const Method methods[] = {Method::Pbi, Method::Pca, Method::Roc, Method::Kl};
        return SmallRun{dataset_relevance(d, 32, BinScheme::Quantile), compute_baselines(d, methods),
                        evaluate_all(d, SplitPlan{2, 5, 3, 3})};
    }();
    return run;
}

}  // namespace

TEST_CASE("pearson") {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(3 + rng.below(50)), y(x.size()), neg(x.size()), affine(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            neg[i] = -2.0 * x[i] + 1.0;
            affine[i] = 0.5 * y[i] - 3.0;
        }
        CHECK(*pearson(x, x) == Approx(1.0).epsilon(1e-12));
        CHECK(*pearson(x, neg) == Approx(-1.0).epsilon(1e-12));
        const double r = *pearson(x, y);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(*pearson(y, x) == Approx(r).epsilon(1e-12));
        CHECK(*pearson(x, affine) == Approx(r).epsilon(1e-9));
    }
    SUBCASE("undefined cases") {
        CHECK_FALSE(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}).has_value());
        CHECK_FALSE(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}).has_value());
    }
    SUBCASE("missing entries are dropped pairwise") {
        const std::vector<std::optional<double>> x{1.0, 2.0, std::nullopt, 3.0, 4.0};
        const std::vector<std::optional<double>> y{2.0, 4.0, 100.0, 6.0, std::nullopt};
        CHECK(*pearson(x, y) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rank_channels") {
    std::array<double, kChannelCount> v{};
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        v[j] = static_cast<double>((j * 7) % 16);
    }
    const auto hb = rank_channels(scores_of(Method::Pca, Direction::HigherBetter, v));
    const auto lb = rank_channels(scores_of(Method::Kl, Direction::LowerBetter, v));
    REQUIRE(hb.size() == kChannelCount);
    CHECK(std::vector<std::size_t>(hb.rbegin(), hb.rend()) == lb);
    for (std::size_t i = 1; i < kChannelCount; ++i) {
        CHECK(v[hb[i - 1]] > v[hb[i]]);
    }

    std::array<double, kChannelCount> neg{};
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        neg[j] = -v[j];
    }
    CHECK(rank_channels(scores_of(Method::Kl, Direction::LowerBetter, v)) ==
          rank_channels(scores_of(Method::Pca, Direction::HigherBetter, neg)));

    SUBCASE("ties keep channel order, missing go last") {
        auto s = scores_of(Method::Roc, Direction::HigherBetter, std::array<double, kChannelCount>{});
        s.scores[3] = std::nullopt;
        s.scores[7] = 1.0;
        const auto r = rank_channels(s);
        CHECK(r.front() == 7);
        CHECK(r.back() == 3);
        CHECK(r[1] == 0);
        CHECK(r[2] == 1);
    }
}

TEST_CASE("build_report") {
    const auto& run = small_run();
    const auto report = build_report(run.relevance, run.baselines, run.metrics);
    REQUIRE(report.methods.size() == 5);
    CHECK(report.methods[0].scores.method == Method::Relevance);
    CHECK(report.mean_accuracy == run.metrics.mean_accuracy());
    for (const auto& m : report.methods) {
        CHECK(m.ranking.size() == kChannelCount);
        if (m.pearson_r) {
            REQUIRE(m.oriented_r.has_value());
            CHECK(*m.oriented_r ==
                  (m.scores.direction == Direction::HigherBetter ? *m.pearson_r : -*m.pearson_r));
        }
    }
    const auto* rel = report.find(Method::Relevance);
    REQUIRE(rel != nullptr);
    std::vector<std::optional<double>> acc(report.mean_accuracy.begin(), report.mean_accuracy.end());
    CHECK(rel->pearson_r == pearson(std::span<const std::optional<double>>(rel->scores.scores), acc));
    CHECK(report.find(Method::Kl) != nullptr);
    CHECK(report.metadata.contains("accuracy_aggregate"));
}

TEST_CASE("identical scores rank identically under any method tag") {
    const auto& run = small_run();
    auto twin = relevance_scores(run.relevance);
    twin.method = Method::Pca;
    CHECK(rank_channels(twin) == rank_channels(relevance_scores(run.relevance)));
}

TEST_CASE("report json round-trip and files") {
    const auto& run = small_run();
    const auto report = build_report(run.relevance, run.baselines, run.metrics);
    const auto doc = to_json(report);
    CHECK(report_from_json(doc) == report);
    CHECK(report_from_json(nlohmann::json::parse(doc.dump())) == report);

    testing::TempDir dir("report");
    write_report_files(report, dir.path(), "hdr");
    for (const char* name : {"report.json", "ranking.csv", "scatter_relevance.csv", "scatter_pbi.csv",
                             "scatter_pca.csv", "scatter_roc.csv", "scatter_kl.csv"}) {
        INFO(name);
        CHECK(std::filesystem::exists(dir.path() / name));
    }
    const std::string ranking = testing::slurp(dir.path() / "ranking.csv");
    CHECK(ranking.rfind("# hdr\n", 0) == 0);
    CHECK(report_from_json(nlohmann::json::parse(testing::slurp(dir.path() / "report.json"))) == report);
}
