#include "skyrank/colorspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "skyrank/error.hpp"

namespace skyrank {

namespace {

constexpr std::array<std::string_view, kChannelCount> kNames = {
    "c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9", "c10", "c11", "c12", "c13", "c14", "c15", "c16"};

constexpr std::array<std::string_view, kChannelCount> kLabels = {
    "R", "G", "B", "H", "S", "V", "Y", "I", "Q", "L*", "a*", "b*", "R/B", "R-B", "(B-R)/(B+R)", "C"};

// D65 reference white (2 degree observer), Y normalized to 1.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

}  // namespace

std::string_view channel_name(std::size_t channel) { return kNames.at(channel); }

std::string_view channel_label(std::size_t channel) { return kLabels.at(channel); }

bool inverted_for_display(std::size_t channel) {
    return std::find(kInvertedForDisplay.begin(), kInvertedForDisplay.end(), channel) != kInvertedForDisplay.end();
}

std::array<double, 3> rgb_to_hsv(const Rgb& p) {
    const double hi = std::max({p.r, p.g, p.b});
    const double lo = std::min({p.r, p.g, p.b});
    const double chroma = hi - lo;
    const double s = hi > 0.0 ? chroma / hi : 0.0;
    double h = 0.0;
    if (chroma > 0.0) {
        if (hi == p.r) {
            h = (p.g - p.b) / chroma;
            if (h < 0.0) {
                h += 6.0;
            }
        } else if (hi == p.g) {
            h = (p.b - p.r) / chroma + 2.0;
        } else {
            h = (p.r - p.g) / chroma + 4.0;
        }
        h /= 6.0;
        if (h >= 1.0) {
            h = 0.0;
        }
    }
    return {h, s, hi};
}

std::array<double, 3> rgb_to_lab(const Rgb& p) {
    const double r = srgb_to_linear(p.r);
    const double g = srgb_to_linear(p.g);
    const double b = srgb_to_linear(p.b);
    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

PixelChannels pixel_channels(const Rgb& p) {
    const auto [h, s, v] = rgb_to_hsv(p);
    const auto [l, a, bb] = rgb_to_lab(p);
    PixelChannels c{};
    c[kR] = p.r;
    c[kG] = p.g;
    c[kB] = p.b;
    c[kHue] = h;
    c[kSaturation] = s;
    c[kValue] = v;
    // NTSC YIQ.
    c[kLumaY] = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
    c[kChromaI] = 0.596 * p.r - 0.274 * p.g - 0.322 * p.b;
    c[kChromaQ] = 0.211 * p.r - 0.523 * p.g + 0.312 * p.b;
    c[kLabL] = l;
    c[kLabA] = a;
    c[kLabB] = bb;
    c[kRedBlueRatio] = p.r / (p.b + kDivisionEpsilon);
    c[kRedBlueDiff] = p.r - p.b;
    c[kBlueRedNormDiff] = (p.b - p.r) / (p.b + p.r + kDivisionEpsilon);
    c[kChroma] = std::max({p.r, p.g, p.b}) - std::min({p.r, p.g, p.b});
    return c;
}

ChannelStack::ChannelStack(std::size_t height, std::size_t width, Planes planes)
    : height_(height), width_(width), planes_(std::move(planes)) {
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        if (planes_[j].size() != height_ * width_) {
            throw std::invalid_argument(fmt::format("channel {} has {} values, expected {}", channel_name(j),
                                                    planes_[j].size(), height_ * width_));
        }
    }
}

ChannelStack extract_channels(const ImageSample& sample) {
    const std::size_t n = sample.pixel_count();
    ChannelStack::Planes planes;
    for (auto& p : planes) {
        p.resize(n);
    }
    const auto pixels = sample.pixels();
    for (std::size_t k = 0; k < n; ++k) {
        const PixelChannels c = pixel_channels(pixels[k]);
        for (std::size_t j = 0; j < kChannelCount; ++j) {
            planes[j][k] = c[j];
        }
    }
    return ChannelStack(sample.height(), sample.width(), std::move(planes));
}

std::vector<double> extract_channel(const ImageSample& sample, std::size_t channel) {
    if (channel >= kChannelCount) {
        throw std::out_of_range(fmt::format("channel index {} out of range", channel));
    }
    const auto pixels = sample.pixels();
    std::vector<double> plane(pixels.size());
    std::transform(pixels.begin(), pixels.end(), plane.begin(),
                   [channel](const Rgb& p) { return pixel_channels(p)[channel]; });
    return plane;
}

std::vector<std::uint8_t> display_plane(std::span<const double> plane, bool inverted) {
    std::vector<std::uint8_t> out(plane.size(), 128);
    if (plane.empty()) {
        return out;
    }
    const auto [lo_it, hi_it] = std::minmax_element(plane.begin(), plane.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (range <= 0.0) {
        return out;
    }
    for (std::size_t k = 0; k < plane.size(); ++k) {
        const auto v = static_cast<std::uint8_t>(std::lround(255.0 * (plane[k] - lo) / range));
        out[k] = inverted ? static_cast<std::uint8_t>(255 - v) : v;
    }
    return out;
}

void dump_channels(const ChannelStack& stack, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
    }
    const int h = static_cast<int>(stack.height());
    const int w = static_cast<int>(stack.width());
    for (std::size_t j = 0; j < kChannelCount; ++j) {
        std::vector<std::uint8_t> gray = display_plane(stack.plane(j), inverted_for_display(j));
        const cv::Mat img(h, w, CV_8UC1, gray.data());
        const auto path = dir / fmt::format("c{:02d}.png", j + 1);
        bool ok = false;
        try {
            ok = cv::imwrite(path.string(), img);
        } catch (const cv::Exception& e) {
            throw DataError(fmt::format("cannot write {}: {}", path.string(), e.what()));
        }
        if (!ok) {
            throw DataError(fmt::format("cannot write {}", path.string()));
        }
    }
}

}  // namespace skyrank
