#include "skyrank/pipeline.hpp"

#include <iostream>
#include <stdexcept>

#include <fmt/core.h>

#include "skyrank/classifier.hpp"
#include "skyrank/colorspace.hpp"
#include "skyrank/dataset.hpp"
#include "skyrank/error.hpp"
#include "skyrank/io.hpp"
#include "skyrank/report.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace skyrank {

json RunConfig::to_json() const {
    return {
        {"manifest", manifest.string()},
        {"bins", bins},
        {"bin_scheme", std::string(to_string(bin_scheme))},
        {"kl_bins", kl_bins},
        {"pbi_variant", std::string(to_string(pbi_variant))},
        {"seed", seed},
        {"repetitions", repetitions},
        {"train_count", train_count},
        {"test_count", test_count},
        {"c_reg", c_reg},
        {"subsample_cap", subsample_cap},
        {"output_dir", output_dir.string()},
    };
}

RunConfig RunConfig::from_json(const json& doc) {
    const json* found = &doc;
    if (doc.contains("config")) {
        found = &doc.at("config");
    } else if (doc.contains("metadata") && doc.at("metadata").contains("config")) {
        found = &doc.at("metadata").at("config");
    }
    const json& c = *found;
    RunConfig r;
    r.manifest = c.at("manifest").get<std::string>();
    r.bins = c.at("bins").get<std::uint32_t>();
    r.bin_scheme = parse_bin_scheme(c.at("bin_scheme").get<std::string>());
    r.kl_bins = c.at("kl_bins").get<std::uint32_t>();
    r.pbi_variant = parse_pbi_variant(c.at("pbi_variant").get<std::string>());
    r.seed = c.at("seed").get<std::uint64_t>();
    r.repetitions = c.at("repetitions").get<std::size_t>();
    r.train_count = c.at("train_count").get<std::size_t>();
    r.test_count = c.at("test_count").get<std::size_t>();
    r.c_reg = c.at("c_reg").get<double>();
    r.subsample_cap = c.at("subsample_cap").get<std::size_t>();
    r.output_dir = c.at("output_dir").get<std::string>();
    return r;
}

void RunConfig::validate() const {
    if (bins < 2) {
        throw std::invalid_argument("--bins must be at least 2");
    }
    if (kl_bins < 2) {
        throw std::invalid_argument("--kl-bins must be at least 2");
    }
    if (repetitions == 0 || train_count == 0 || test_count == 0 || subsample_cap == 0) {
        throw std::invalid_argument("--repetitions, --train-count, --test-count and --subsample-cap must be positive");
    }
    if (!(c_reg > 0.0)) {
        throw std::invalid_argument("--c-reg must be positive");
    }
}

std::string config_header(const RunConfig& config) { return "skyrank config " + config.to_json().dump(); }

namespace {

Dataset load(const RunConfig& config) {
    if (config.manifest.empty()) {
        throw DataError("no manifest given");
    }
    return load_manifest(config.manifest);
}

void prepare(const RunConfig& config) {
    config.validate();
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw DataError(fmt::format("cannot create output directory {}: {}", config.output_dir.string(), ec.message()));
    }
}

void progress(const std::string& message) { std::cerr << message << '\n'; }

json with_config(const RunConfig& config, const char* key, json payload) {
    return {{"config", config.to_json()}, {key, std::move(payload)}};
}

}  // namespace

void cmd_channels(const RunConfig& config) {
    prepare(config);
    const Dataset dataset = load(config);
    for (const auto& sample : dataset) {
        const fs::path dir = config.output_dir / "channels" / sample.id();
        try {
            dump_channels(extract_channels(sample), dir);
        } catch (const DataError& e) {
            throw DataError(fmt::format("sample '{}': {}", sample.id(), e.what()));
        }
    }
    io::write_text(config.output_dir / "channels" / "config.json", config.to_json().dump(2) + "\n");
    progress(fmt::format("wrote channel planes for {} images", dataset.size()));
}

void cmd_relevance(const RunConfig& config) {
    prepare(config);
    const Dataset dataset = load(config);
    const RelevanceResult result = dataset_relevance(dataset, config.bins, config.bin_scheme);
    const std::string header = config_header(config);
    io::write_text(config.output_dir / "relevance.json",
                   with_config(config, "relevance", io::to_json(result)).dump(2) + "\n");
    io::write_text(config.output_dir / "relevance_per_image.csv", io::relevance_per_image_csv(result, header));
    io::write_text(config.output_dir / "relevance_average.csv", io::relevance_average_csv(result, header));
    progress(fmt::format("relevance: {} images, {} {} bins", dataset.size(), config.bins, to_string(config.bin_scheme)));
}

void cmd_baselines(const RunConfig& config, std::vector<Method> methods) {
    prepare(config);
    if (methods.empty()) {
        methods = {Method::Pbi, Method::Pca, Method::Roc, Method::Kl};
    }
    const Dataset dataset = load(config);
    BaselineOptions options;
    options.kl_bins = config.kl_bins;
    options.pbi_variant = config.pbi_variant;
    const auto scores = compute_baselines(dataset, methods, options);
    json list = json::array();
    for (const auto& s : scores) {
        list.push_back(io::to_json(s));
        for (std::size_t j = 0; j < kChannelCount; ++j) {
            if (!s.scores[j]) {
                std::cerr << fmt::format("warning: {} score undefined for {} on every image; excluded from correlation\n",
                                         to_string(s.method), channel_name(j));
            }
        }
    }
    io::write_text(config.output_dir / "baselines.json", with_config(config, "baselines", list).dump(2) + "\n");
    io::write_text(config.output_dir / "baselines.csv", io::baselines_csv(scores, config_header(config)));
    progress(fmt::format("baselines: {} methods over {} images", scores.size(), dataset.size()));
}

void cmd_classify(const RunConfig& config) {
    prepare(config);
    const Dataset dataset = load(config);
    SplitPlan plan{config.seed, config.repetitions, config.train_count, config.test_count};
    EvaluateOptions options{config.c_reg, config.subsample_cap};
    ClassificationMetrics metrics;
    try {
        metrics = evaluate_all(dataset, plan, options);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    const std::string header = config_header(config);
    io::write_text(config.output_dir / "classify.json",
                   with_config(config, "metrics", io::to_json(metrics)).dump(2) + "\n");
    io::write_text(config.output_dir / "metrics.csv", io::metrics_csv(metrics, header));
    io::write_text(config.output_dir / "metrics_summary.csv", io::metrics_summary_csv(metrics, header));
    progress(fmt::format("classify: {} splits x {} channels", plan.repetitions, kChannelCount));
}

void cmd_report(const RunConfig& config) {
    prepare(config);
    const json relevance_doc = io::read_json(config.output_dir / "relevance.json");
    const json baselines_doc = io::read_json(config.output_dir / "baselines.json");
    const json classify_doc = io::read_json(config.output_dir / "classify.json");

    CorrelationReport report;
    try {
        const RelevanceResult relevance = io::relevance_from_json(relevance_doc.at("relevance"));
        std::vector<ChannelScores> baselines;
        for (const auto& s : baselines_doc.at("baselines")) {
            baselines.push_back(io::scores_from_json(s));
        }
        const ClassificationMetrics metrics = io::metrics_from_json(classify_doc.at("metrics"));
        report = build_report(relevance, baselines, metrics);
    } catch (const json::exception& e) {
        throw DataError(fmt::format("malformed stage output in {}: {}", config.output_dir.string(), e.what()));
    }
    report.metadata["config"] = config.to_json();
    report.metadata["stage_configs"] = {
        {"relevance", relevance_doc.value("config", json())},
        {"baselines", baselines_doc.value("config", json())},
        {"classify", classify_doc.value("config", json())},
    };
    write_report_files(report, config.output_dir, config_header(config));
    for (const auto& m : report.methods) {
        progress(fmt::format("{:>10}  r = {}", to_string(m.scores.method),
                             m.pearson_r ? fmt::format("{:+.3f}", *m.pearson_r) : std::string("undefined")));
    }
}

fs::path cmd_synth(std::size_t n, std::uint64_t seed, std::size_t height, std::size_t width, const fs::path& out) {
    const fs::path manifest = write_dataset(synth_dataset(n, seed, height, width), out);
    progress(fmt::format("wrote {} synthetic samples to {}", n, manifest.string()));
    return manifest;
}

void cmd_all(const RunConfig& config) {
    cmd_relevance(config);
    cmd_baselines(config);
    cmd_classify(config);
    cmd_report(config);
}

}  // namespace skyrank
