#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace skyrank {

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    bool operator==(const Rgb&) const = default;
};

inline constexpr std::uint8_t kSky = 0;
inline constexpr std::uint8_t kCloud = 1;

/// One sky image with its aligned ground-truth mask. Pixels are stored row-major,
/// channel values normalized to [0,1]; mask values are kSky or kCloud.
class ImageSample {
public:
    /// Throws std::invalid_argument when the invariants do not hold.
    ImageSample(std::string id, std::size_t height, std::size_t width, std::vector<Rgb> rgb,
                std::vector<std::uint8_t> mask);

    const std::string& id() const { return id_; }
    std::size_t height() const { return height_; }
    std::size_t width() const { return width_; }
    std::size_t pixel_count() const { return height_ * width_; }

    std::span<const Rgb> pixels() const { return rgb_; }
    std::span<const std::uint8_t> mask() const { return mask_; }

    const Rgb& at(std::size_t row, std::size_t col) const { return rgb_[row * width_ + col]; }
    std::uint8_t label_at(std::size_t row, std::size_t col) const { return mask_[row * width_ + col]; }

    bool operator==(const ImageSample&) const = default;

private:
    std::string id_;
    std::size_t height_;
    std::size_t width_;
    std::vector<Rgb> rgb_;
    std::vector<std::uint8_t> mask_;
};

class Dataset {
public:
    /// Throws std::invalid_argument on an empty sample list or duplicate ids.
    Dataset(std::string name, std::vector<ImageSample> samples);

    const std::string& name() const { return name_; }
    std::size_t size() const { return samples_.size(); }
    const ImageSample& operator[](std::size_t i) const { return samples_[i]; }
    auto begin() const { return samples_.begin(); }
    auto end() const { return samples_.end(); }

    bool operator==(const Dataset&) const = default;

private:
    std::string name_;
    std::vector<ImageSample> samples_;
};

using WarningSink = std::function<void(const std::string&)>;

/// Writes each warning to std::cerr.
void stderr_warning(const std::string& message);

/// Mask pixels whose luminance falls strictly inside this band are ambiguous and
/// produce a warning; they are still binarized at kMaskThreshold.
inline constexpr double kMaskThreshold = 0.5;
inline constexpr double kMaskWarnLow = 0.1;
inline constexpr double kMaskWarnHigh = 0.9;

/// Reads a JSON manifest: an array of {"id", "image", "mask"} objects with paths relative
/// to the manifest file. Output order follows the manifest. Throws DataError.
Dataset load_manifest(const std::filesystem::path& manifest, const WarningSink& warn = stderr_warning);

/// Writes <id>.png and <id>_mask.png for every sample plus manifest.json into dir.
/// Returns the manifest path.
std::filesystem::path write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Deterministic synthetic sky scenes: vertical blue gradient with elliptical gray-white
/// cloud blobs. Every mask contains both labels. Requires n >= 1 and height*width >= 2.
Dataset synth_dataset(std::size_t n, std::uint64_t seed, std::size_t height, std::size_t width);

}  // namespace skyrank
