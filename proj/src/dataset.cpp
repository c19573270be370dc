#include "skyrank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <unordered_set>

#include <fmt/core.h>
#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "skyrank/error.hpp"
#include "skyrank/random.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace skyrank {

ImageSample::ImageSample(std::string id, std::size_t height, std::size_t width, std::vector<Rgb> rgb,
                         std::vector<std::uint8_t> mask)
    : id_(std::move(id)), height_(height), width_(width), rgb_(std::move(rgb)), mask_(std::move(mask)) {
    if (height_ == 0 || width_ == 0) {
        throw std::invalid_argument(fmt::format("sample '{}': empty image", id_));
    }
    if (rgb_.size() != height_ * width_ || mask_.size() != height_ * width_) {
        throw std::invalid_argument(fmt::format("sample '{}': image and mask sizes do not match {}x{}", id_,
                                                height_, width_));
    }
    if (std::any_of(mask_.begin(), mask_.end(), [](std::uint8_t v) { return v > kCloud; })) {
        throw std::invalid_argument(fmt::format("sample '{}': mask values must be 0 or 1", id_));
    }
}

Dataset::Dataset(std::string name, std::vector<ImageSample> samples)
    : name_(std::move(name)), samples_(std::move(samples)) {
    if (samples_.empty()) {
        throw std::invalid_argument("empty dataset");
    }
    std::unordered_set<std::string> seen;
    for (const auto& s : samples_) {
        if (!seen.insert(s.id()).second) {
            throw std::invalid_argument(fmt::format("duplicate sample id '{}'", s.id()));
        }
    }
}

void stderr_warning(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

namespace {

cv::Mat read_color(const fs::path& path, const std::string& id, const char* what) {
    if (!fs::exists(path)) {
        throw DataError(fmt::format("sample '{}': {} file not found: {}", id, what, path.string()));
    }
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (img.empty()) {
        throw DataError(fmt::format("sample '{}': cannot decode {} file {}", id, what, path.string()));
    }
    return img;
}

ImageSample load_sample(const std::string& id, const fs::path& image_path, const fs::path& mask_path,
                        const WarningSink& warn) {
    const cv::Mat image = read_color(image_path, id, "image");
    const cv::Mat mask = read_color(mask_path, id, "mask");
    if (image.size() != mask.size()) {
        throw DataError(fmt::format("sample '{}': image is {}x{} but mask is {}x{}", id, image.rows, image.cols,
                                    mask.rows, mask.cols));
    }

    const auto h = static_cast<std::size_t>(image.rows);
    const auto w = static_cast<std::size_t>(image.cols);
    std::vector<Rgb> rgb(h * w);
    std::vector<std::uint8_t> labels(h * w);
    std::size_t ambiguous = 0;
    for (int y = 0; y < image.rows; ++y) {
        const auto* ip = image.ptr<cv::Vec3b>(y);
        const auto* mp = mask.ptr<cv::Vec3b>(y);
        for (int x = 0; x < image.cols; ++x) {
            const std::size_t k = static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x);
            // OpenCV decodes to BGR.
            rgb[k] = {ip[x][2] / 255.0, ip[x][1] / 255.0, ip[x][0] / 255.0};
            const double lum = (0.299 * mp[x][2] + 0.587 * mp[x][1] + 0.114 * mp[x][0]) / 255.0;
            if (lum > kMaskWarnLow && lum < kMaskWarnHigh) {
                ++ambiguous;
            }
            labels[k] = lum > kMaskThreshold ? kCloud : kSky;
        }
    }
    if (ambiguous > 0 && warn) {
        warn(fmt::format("sample '{}': {} mask pixels with non-binary luminance were binarized at {}", id,
                         ambiguous, kMaskThreshold));
    }
    return ImageSample(id, h, w, std::move(rgb), std::move(labels));
}

std::string require_string(const json& entry, const char* key, std::size_t index) {
    if (!entry.is_object() || !entry.contains(key) || !entry.at(key).is_string()) {
        throw DataError(fmt::format("manifest entry {}: missing string field \"{}\"", index, key));
    }
    return entry.at(key).get<std::string>();
}

}  // namespace

Dataset load_manifest(const fs::path& manifest, const WarningSink& warn) {
    std::ifstream in(manifest);
    if (!in) {
        throw DataError(fmt::format("cannot open manifest {}", manifest.string()));
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("manifest {} is not valid JSON: {}", manifest.string(), e.what()));
    }
    if (!doc.is_array()) {
        throw DataError(fmt::format("manifest {} must be a JSON array", manifest.string()));
    }
    if (doc.empty()) {
        throw DataError("empty dataset");
    }

    const fs::path base = manifest.parent_path();
    std::vector<ImageSample> samples;
    samples.reserve(doc.size());
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string id = require_string(doc[i], "id", i);
        if (!seen.insert(id).second) {
            throw DataError(fmt::format("duplicate sample id '{}' in manifest", id));
        }
        samples.push_back(load_sample(id, base / require_string(doc[i], "image", i),
                                      base / require_string(doc[i], "mask", i), warn));
    }
    return Dataset(manifest.stem().string(), std::move(samples));
}

fs::path write_dataset(const Dataset& dataset, const fs::path& dir) {
    fs::create_directories(dir);
    json manifest = json::array();
    for (const auto& s : dataset) {
        const int h = static_cast<int>(s.height());
        const int w = static_cast<int>(s.width());
        cv::Mat image(h, w, CV_8UC3);
        cv::Mat mask(h, w, CV_8UC1);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto& p = s.at(y, x);
                auto to_byte = [](double v) { return cv::saturate_cast<std::uint8_t>(std::lround(v * 255.0)); };
                image.at<cv::Vec3b>(y, x) = {to_byte(p.b), to_byte(p.g), to_byte(p.r)};
                mask.at<std::uint8_t>(y, x) = s.label_at(y, x) == kCloud ? 255 : 0;
            }
        }
        const std::string image_name = s.id() + ".png";
        const std::string mask_name = s.id() + "_mask.png";
        if (!cv::imwrite((dir / image_name).string(), image) || !cv::imwrite((dir / mask_name).string(), mask)) {
            throw DataError(fmt::format("failed to write sample '{}' into {}", s.id(), dir.string()));
        }
        manifest.push_back({{"id", s.id()}, {"image", image_name}, {"mask", mask_name}});
    }
    const fs::path path = dir / "manifest.json";
    std::ofstream out(path);
    if (!out) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
    out << manifest.dump(2) << '\n';
    return path;
}

namespace {

struct Blob {
    double cy, cx;    // center, pixel units
    double ry, rx;    // semi-axes
    double cos_t, sin_t;
    double brightness;

    // Squared normalized distance; <= 1 inside the ellipse.
    double distance2(double y, double x) const {
        const double dy = y - cy;
        const double dx = x - cx;
        const double u = dx * cos_t + dy * sin_t;
        const double v = -dx * sin_t + dy * cos_t;
        return (u * u) / (rx * rx) + (v * v) / (ry * ry);
    }
};

double quantize(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

std::vector<Blob> place_blobs(Rng& rng, std::size_t height, std::size_t width) {
    const auto h = static_cast<double>(height);
    const auto w = static_cast<double>(width);
    const std::size_t count = 1 + rng.below(4);
    std::vector<Blob> blobs;
    for (std::size_t i = 0; i < count; ++i) {
        Blob b{};
        // The first blob is centred on a pixel center so at least one pixel is cloud.
        if (i == 0) {
            b.cy = static_cast<double>(rng.below(height)) + 0.5;
            b.cx = static_cast<double>(rng.below(width)) + 0.5;
        } else {
            b.cy = rng.uniform(0.0, h);
            b.cx = rng.uniform(0.0, w);
        }
        b.ry = rng.uniform(0.08, 0.3) * h;
        b.rx = rng.uniform(0.08, 0.3) * w;
        const double theta = rng.uniform(0.0, 3.141592653589793);
        b.cos_t = std::cos(theta);
        b.sin_t = std::sin(theta);
        b.brightness = rng.uniform(0.80, 0.98);
        blobs.push_back(b);
    }
    return blobs;
}

ImageSample synth_one(const std::string& id, std::uint64_t seed, std::size_t height, std::size_t width) {
    Rng rng(seed);
    const std::size_t n = height * width;

    std::vector<Blob> blobs;
    std::vector<std::uint8_t> mask(n);
    std::vector<double> shade(n);
    for (int attempt = 0;; ++attempt) {
        if (attempt == 64) {
            throw std::logic_error("synth_dataset: could not place clouds with both labels present");
        }
        blobs = place_blobs(rng, height, width);
        std::size_t cloud = 0;
        for (std::size_t y = 0; y < height; ++y) {
            for (std::size_t x = 0; x < width; ++x) {
                const std::size_t k = y * width + x;
                double best = 2.0;
                double bright = 0.0;
                for (const auto& b : blobs) {
                    const double d2 = b.distance2(static_cast<double>(y) + 0.5, static_cast<double>(x) + 0.5);
                    if (d2 <= 1.0 && d2 < best) {
                        best = d2;
                        bright = b.brightness * (1.0 - 0.15 * d2);
                    }
                }
                mask[k] = best <= 1.0 ? kCloud : kSky;
                shade[k] = bright;
                cloud += mask[k];
            }
        }
        if (cloud > 0 && cloud < n) {
            break;
        }
    }

    const Rgb top{rng.uniform(0.24, 0.32), rng.uniform(0.48, 0.56), rng.uniform(0.62, 0.72)};
    const Rgb horizon{top.r + 0.10, top.g + 0.06, top.b + 0.04};

    std::vector<Rgb> rgb(n);
    for (std::size_t y = 0; y < height; ++y) {
        const double t = height > 1 ? static_cast<double>(y) / static_cast<double>(height - 1) : 0.0;
        for (std::size_t x = 0; x < width; ++x) {
            const std::size_t k = y * width + x;
            const double common = rng.uniform(-0.02, 0.02);
            Rgb p;
            if (mask[k] == kCloud) {
                // Gray-white with a faint warm tint.
                p = {shade[k], shade[k] * 0.98, shade[k] * 0.95};
            } else {
                p = {top.r + t * (horizon.r - top.r), top.g + t * (horizon.g - top.g),
                     top.b + t * (horizon.b - top.b)};
            }
            rgb[k] = {quantize(p.r + common + rng.uniform(-0.005, 0.005)),
                      quantize(p.g + common + rng.uniform(-0.005, 0.005)),
                      quantize(p.b + common + rng.uniform(-0.005, 0.005))};
        }
    }
    return ImageSample(id, height, width, std::move(rgb), std::move(mask));
}

}  // namespace

Dataset synth_dataset(std::size_t n, std::uint64_t seed, std::size_t height, std::size_t width) {
    if (n == 0) {
        throw std::invalid_argument("synth_dataset: n must be at least 1");
    }
    if (height * width < 2) {
        throw std::invalid_argument("synth_dataset: image needs at least two pixels");
    }
    std::vector<ImageSample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        samples.push_back(synth_one(fmt::format("synth_{:03d}", i), derive_seed(seed, i), height, width));
    }
    return Dataset(fmt::format("synth_{}", seed), std::move(samples));
}

}  // namespace skyrank
