// skyrank: rank color channels for sky/cloud segmentation.
//
//   skyrank synth --count 32 --out data/synth
//   skyrank all --manifest data/synth/manifest.json --output-dir out

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "skyrank/error.hpp"
#include "skyrank/io.hpp"
#include "skyrank/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Flags mirroring RunConfig. Values given on the command line override a --config file.
struct ConfigFlags {
    skyrank::RunConfig values;
    std::string bin_scheme = "quantile";
    std::string pbi_variant = "pearson";
    std::string config_file;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app) {
        auto& v = values;
        options["manifest"] = app.add_option("--manifest", v.manifest, "JSON manifest of image/mask pairs");
        options["bins"] = app.add_option("--bins", v.bins, "bins per channel for the rough-set tables")->capture_default_str();
        options["bin_scheme"] = app.add_option("--bin-scheme", bin_scheme, "quantile or uniform")
                                    ->check(CLI::IsMember({"quantile", "uniform"}))
                                    ->capture_default_str();
        options["kl_bins"] = app.add_option("--kl-bins", v.kl_bins, "histogram bins for the KL baseline")->capture_default_str();
        options["pbi_variant"] = app.add_option("--pbi-variant", pbi_variant, "pearson or coefficient")
                                     ->check(CLI::IsMember({"pearson", "coefficient"}))
                                     ->capture_default_str();
        options["seed"] = app.add_option("--seed", v.seed, "split and subsampling seed")->capture_default_str();
        options["repetitions"] = app.add_option("--repetitions", v.repetitions, "random train/test splits")->capture_default_str();
        options["train_count"] = app.add_option("--train-count", v.train_count, "training images per split")->capture_default_str();
        options["test_count"] = app.add_option("--test-count", v.test_count, "test images per split")->capture_default_str();
        options["c_reg"] = app.add_option("--c-reg", v.c_reg, "SVM regularization constant")->capture_default_str();
        options["subsample_cap"] = app.add_option("--subsample-cap", v.subsample_cap, "max training pixels per split")->capture_default_str();
        options["output_dir"] = app.add_option("--output-dir,-o", v.output_dir, "output directory")->capture_default_str();
        app.add_option("--config", config_file, "re-run from a config (or any output JSON embedding one)");
    }

    skyrank::RunConfig resolve() const {
        skyrank::RunConfig cfg;
        if (!config_file.empty()) {
            cfg = skyrank::RunConfig::from_json(skyrank::io::read_json(config_file));
        }
        auto given = [&](const char* key) { return options.at(key)->count() > 0; };
        if (given("manifest")) cfg.manifest = values.manifest;
        if (given("bins")) cfg.bins = values.bins;
        if (given("bin_scheme")) cfg.bin_scheme = skyrank::parse_bin_scheme(bin_scheme);
        if (given("kl_bins")) cfg.kl_bins = values.kl_bins;
        if (given("pbi_variant")) cfg.pbi_variant = skyrank::parse_pbi_variant(pbi_variant);
        if (given("seed")) cfg.seed = values.seed;
        if (given("repetitions")) cfg.repetitions = values.repetitions;
        if (given("train_count")) cfg.train_count = values.train_count;
        if (given("test_count")) cfg.test_count = values.test_count;
        if (given("c_reg")) cfg.c_reg = values.c_reg;
        if (given("subsample_cap")) cfg.subsample_cap = values.subsample_cap;
        if (given("output_dir")) cfg.output_dir = values.output_dir;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rank color channels for sky/cloud segmentation by rough-set relevance"};
    app.require_subcommand(1);

    ConfigFlags channels_flags, relevance_flags, baselines_flags, classify_flags, report_flags, all_flags;
    auto* channels = app.add_subcommand("channels", "dump the 16 channel planes of every image as PNGs");
    channels_flags.attach(*channels);
    auto* relevance = app.add_subcommand("relevance", "per-image and average rough-set relevance");
    relevance_flags.attach(*relevance);
    auto* baselines = app.add_subcommand("baselines", "bimodality, PCA loading, ROC AUC and KL scores");
    baselines_flags.attach(*baselines);
    std::string method = "all";
    baselines->add_option("--method", method, "pbi, pca, roc, kl or all")
        ->check(CLI::IsMember({"pbi", "pca", "roc", "kl", "all"}))
        ->capture_default_str();
    auto* classify = app.add_subcommand("classify", "per-channel SVM accuracy over repeated splits");
    classify_flags.attach(*classify);
    auto* report = app.add_subcommand("report", "correlate every method with classification accuracy");
    report_flags.attach(*report);
    auto* all = app.add_subcommand("all", "relevance, baselines, classify and report");
    all_flags.attach(*all);

    auto* synth = app.add_subcommand("synth", "write a deterministic synthetic sky/cloud dataset");
    std::size_t synth_count = 8;
    std::uint64_t synth_seed = 42;
    std::size_t synth_height = 64;
    std::size_t synth_width = 64;
    std::string synth_out;
    synth->add_option("--count,-n", synth_count, "number of images")->capture_default_str();
    synth->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
    synth->add_option("--height", synth_height, "image height")->capture_default_str();
    synth->add_option("--width", synth_width, "image width")->capture_default_str();
    synth->add_option("--out", synth_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*synth) {
            if (synth_count == 0 || synth_height * synth_width < 2) {
                std::cerr << "error: synth needs --count >= 1 and at least two pixels per image\n";
                return kExitUsage;
            }
            skyrank::cmd_synth(synth_count, synth_seed, synth_height, synth_width, synth_out);
            return 0;
        }

        const auto run = [](const ConfigFlags& flags, auto&& command) -> int {
            skyrank::RunConfig cfg;
            try {
                cfg = flags.resolve();
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitUsage;
            }
            command(cfg);
            return 0;
        };

        if (*channels) return run(channels_flags, skyrank::cmd_channels);
        if (*relevance) return run(relevance_flags, skyrank::cmd_relevance);
        if (*classify) return run(classify_flags, skyrank::cmd_classify);
        if (*report) return run(report_flags, skyrank::cmd_report);
        if (*all) return run(all_flags, skyrank::cmd_all);
        if (*baselines) {
            return run(baselines_flags, [&](const skyrank::RunConfig& cfg) {
                std::vector<skyrank::Method> methods;
                if (method != "all") {
                    methods.push_back(skyrank::parse_method(method));
                }
                skyrank::cmd_baselines(cfg, methods);
            });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
