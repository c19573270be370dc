#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "skyrank/dataset.hpp"

namespace skyrank {

inline constexpr std::size_t kChannelCount = 16;

/// Zero-based channel indices; channel c<k> lives at index k-1.
enum Channel : std::size_t {
    kR = 0,
    kG,
    kB,
    kHue,
    kSaturation,
    kValue,
    kLumaY,
    kChromaI,
    kChromaQ,
    kLabL,
    kLabA,
    kLabB,
    kRedBlueRatio,
    kRedBlueDiff,
    kBlueRedNormDiff,
    kChroma,
};

/// Guard for the R/B and (B-R)/(B+R) denominators.
inline constexpr double kDivisionEpsilon = 1e-6;

/// Planes displayed inverted so that cloud appears lighter than sky (H, S, Q, (B-R)/(B+R), C).
inline constexpr std::array<std::size_t, 5> kInvertedForDisplay = {kHue, kSaturation, kChromaQ, kBlueRedNormDiff,
                                                                   kChroma};

/// "c1".."c16".
std::string_view channel_name(std::size_t channel);
/// Human-readable component name, e.g. "R", "L*", "(B-R)/(B+R)".
std::string_view channel_label(std::size_t channel);
bool inverted_for_display(std::size_t channel);

using PixelChannels = std::array<double, kChannelCount>;

/// All 16 channel values of one pixel with components in [0,1].
PixelChannels pixel_channels(const Rgb& p);

/// CIE L*a*b* (D65, sRGB transfer) of one pixel.
std::array<double, 3> rgb_to_lab(const Rgb& p);

/// Hexcone HSV with H in [0,1); achromatic pixels get H = 0.
std::array<double, 3> rgb_to_hsv(const Rgb& p);

class ChannelStack {
public:
    using Planes = std::array<std::vector<double>, kChannelCount>;

    /// Every plane must hold height*width values.
    ChannelStack(std::size_t height, std::size_t width, Planes planes);

    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t pixel_count() const { return height_ * width_; }
    std::span<const double> plane(std::size_t channel) const { return planes_.at(channel); }

private:
    std::size_t height_;
    std::size_t width_;
    Planes planes_;
};

ChannelStack extract_channels(const ImageSample& sample);

/// A single plane of extract_channels(sample), without materializing the other 15.
std::vector<double> extract_channel(const ImageSample& sample, std::size_t channel);

/// 8-bit display rendering of one plane: min-max scaled to [0,255] (constant planes map to 128),
/// then inverted for the channels in kInvertedForDisplay.
std::vector<std::uint8_t> display_plane(std::span<const double> plane, bool inverted);

/// Writes c01.png .. c16.png into dir, creating it if needed. Throws DataError on I/O failure.
void dump_channels(const ChannelStack& stack, const std::filesystem::path& dir);

}  // namespace skyrank
