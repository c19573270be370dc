#include "skyrank/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/core.h>

#include "skyrank/error.hpp"

using json = nlohmann::json;

namespace skyrank::io {

std::string format_double(double v) { return fmt::format("{}", v); }

std::size_t parse_channel_name(const std::string& name) {
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        if (name == channel_name(j)) {
            return j;
        }
    }
    throw std::invalid_argument(fmt::format("unknown channel '{}'", name));
}

json to_json(const ChannelScores& scores) {
    json values = json::array();
    for (const auto& s : scores.scores) {
        values.push_back(s ? json(*s) : json(nullptr));
    }
    return {
        {"method", std::string(to_string(scores.method))},
        {"direction", std::string(to_string(scores.direction))},
        {"variant", scores.variant},
        {"scores", values},
    };
}

ChannelScores scores_from_json(const json& doc) {
    ChannelScores s;
    s.method = parse_method(doc.at("method").get<std::string>());
    s.direction = parse_direction(doc.at("direction").get<std::string>());
    s.variant = doc.at("variant").get<std::string>();
    const auto& values = doc.at("scores");
    if (values.size() != kChannelCount) {
        throw DataError(fmt::format("{} scores carry {} entries, expected {}", to_string(s.method), values.size(),
                                    kChannelCount));
    }
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        if (!values[j].is_null()) {
            s.scores[j] = values[j].get<double>();
        }
    }
    return s;
}

json to_json(const RelevanceResult& result) {
    json images = json::array();
    for (std::size_t i = 0; i < result.image_ids.size(); ++i) {
        images.push_back({{"id", result.image_ids[i]}, {"gamma", result.per_image[i]}});
    }
    return {
        {"bins", result.bins},
        {"scheme", std::string(to_string(result.scheme))},
        {"images", images},
        {"average", result.average},
    };
}

RelevanceResult relevance_from_json(const json& doc) {
    RelevanceResult r;
    r.bins = doc.at("bins").get<std::uint32_t>();
    r.scheme = parse_bin_scheme(doc.at("scheme").get<std::string>());
    for (const auto& image : doc.at("images")) {
        r.image_ids.push_back(image.at("id").get<std::string>());
        r.per_image.push_back(image.at("gamma").get<std::array<double, kChannelCount>>());
    }
    r.average = doc.at("average").get<std::array<double, kChannelCount>>();
    return r;
}

json to_json(const SplitPlan& plan) {
    return {
        {"seed", plan.seed},
        {"repetitions", plan.repetitions},
        {"train_count", plan.train_count},
        {"test_count", plan.test_count},
    };
}

SplitPlan split_plan_from_json(const json& doc) {
    SplitPlan p;
    p.seed = doc.at("seed").get<std::uint64_t>();
    p.repetitions = doc.at("repetitions").get<std::size_t>();
    p.train_count = doc.at("train_count").get<std::size_t>();
    p.test_count = doc.at("test_count").get<std::size_t>();
    return p;
}

json to_json(const ClassificationMetrics& metrics) {
    json channels = json::array();
    for (const auto& c : metrics.channels) {
        json splits = json::array();
        for (const auto& s : c.splits) {
            splits.push_back({
                {"tp", s.counts.tp},
                {"fp", s.counts.fp},
                {"tn", s.counts.tn},
                {"fn", s.counts.fn},
                {"weight", s.model.weight},
                {"bias", s.model.bias},
                {"accuracy", s.accuracy},
                {"precision", s.precision},
                {"recall", s.recall},
                {"f_score", s.f_score},
            });
        }
        channels.push_back({{"channel", std::string(channel_name(c.channel))}, {"splits", splits}});
    }
    return {
        {"plan", to_json(metrics.plan)},
        {"c_reg", metrics.options.c_reg},
        {"subsample_cap", metrics.options.subsample_cap},
        {"channels", channels},
    };
}

ClassificationMetrics metrics_from_json(const json& doc) {
    ClassificationMetrics m;
    m.plan = split_plan_from_json(doc.at("plan"));
    m.options.c_reg = doc.at("c_reg").get<double>();
    m.options.subsample_cap = doc.at("subsample_cap").get<std::size_t>();
    for (const auto& c : doc.at("channels")) {
        ChannelMetrics cm;
        cm.channel = parse_channel_name(c.at("channel").get<std::string>());
        for (const auto& s : c.at("splits")) {
            SplitOutcome o;
            o.counts = {s.at("tp").get<std::uint64_t>(), s.at("fp").get<std::uint64_t>(),
                        s.at("tn").get<std::uint64_t>(), s.at("fn").get<std::uint64_t>()};
            o.model = {s.at("weight").get<double>(), s.at("bias").get<double>()};
            o.accuracy = s.at("accuracy").get<double>();
            o.precision = s.at("precision").get<double>();
            o.recall = s.at("recall").get<double>();
            o.f_score = s.at("f_score").get<double>();
            cm.splits.push_back(o);
        }
        m.channels.push_back(std::move(cm));
    }
    return m;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
    out << text;
    if (!out) {
        throw DataError(fmt::format("failed writing {}", path.string()));
    }
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("missing input {}", path.string()));
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
    }
}

namespace {

std::string channel_header() {
    std::string h;
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        h += fmt::format(",{}", channel_name(j));
    }
    return h;
}

std::string row(const std::array<double, kChannelCount>& values) {
    std::string out;
    for (const double v : values) {
        out += "," + format_double(v);
    }
    return out;
}

}  // namespace

std::string relevance_per_image_csv(const RelevanceResult& result, const std::string& header) {
    std::string out = fmt::format("# {}\nid{}\n", header, channel_header());
    for (std::size_t i = 0; i < result.image_ids.size(); ++i) {
        out += result.image_ids[i] + row(result.per_image[i]) + "\n";
    }
    return out;
}

std::string relevance_average_csv(const RelevanceResult& result, const std::string& header) {
    return fmt::format("# {}\nstatistic{}\naverage{}\n", header, channel_header(), row(result.average));
}

std::string baselines_csv(const std::vector<ChannelScores>& scores, const std::string& header) {
    std::string out = fmt::format("# {}\nmethod,direction{}\n", header, channel_header());
    for (const auto& s : scores) {
        out += fmt::format("{},{}", to_string(s.method), to_string(s.direction));
        for (const auto& v : s.scores) {
            out += "," + (v ? format_double(*v) : std::string());
        }
        out += "\n";
    }
    return out;
}

std::string metrics_csv(const ClassificationMetrics& metrics, const std::string& header) {
    std::string out =
        fmt::format("# {}\nchannel,split,tp,fp,tn,fn,weight,bias,accuracy,precision,recall,f_score\n", header);
    for (const auto& c : metrics.channels) {
        for (std::size_t r = 0; r < c.splits.size(); ++r) {
            const auto& s = c.splits[r];
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", channel_name(c.channel), r, s.counts.tp,
                               s.counts.fp, s.counts.tn, s.counts.fn, format_double(s.model.weight),
                               format_double(s.model.bias), format_double(s.accuracy), format_double(s.precision),
                               format_double(s.recall), format_double(s.f_score));
        }
    }
    return out;
}

std::string metrics_summary_csv(const ClassificationMetrics& metrics, const std::string& header) {
    std::string out = fmt::format("# {}\nchannel,label,metric,median,q25,q75,min,max,mean\n", header);
    for (const auto& c : metrics.channels) {
        const std::pair<const char*, std::vector<double>> series[] = {
            {"accuracy", c.accuracy()}, {"f_score", c.f_score()}, {"precision", c.precision()}, {"recall", c.recall()}};
        for (const auto& [name, values] : series) {
            const MetricSummary s = summarize(values);
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", channel_name(c.channel), channel_label(c.channel), name,
                               format_double(s.median), format_double(s.q25), format_double(s.q75),
                               format_double(s.min), format_double(s.max), format_double(s.mean));
        }
    }
    return out;
}

}  // namespace skyrank::io
