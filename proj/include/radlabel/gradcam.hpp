#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radlabel {

// C x H x W, channel-major.
struct Tensor3 {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(std::size_t c, std::size_t h, std::size_t w) : channels(c), height(h), width(w), data(c * h * w, 0.0) {}

    double& at(std::size_t c, std::size_t i, std::size_t j) { return data[(c * height + i) * width + j]; }
    double at(std::size_t c, std::size_t i, std::size_t j) const { return data[(c * height + i) * width + j]; }
    std::span<const double> channel(std::size_t c) const {
        return std::span(data).subspan(c * height * width, height * width);
    }
    bool operator==(const Tensor3&) const = default;
};

// A single-channel H x W plane: raw maps, heatmaps and preprocessed images.
struct Grid {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t h, std::size_t w, double fill = 0.0) : height(h), width(w), values(h * w, fill) {}

    double& at(std::size_t i, std::size_t j) { return values[i * width + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * width + j]; }
    bool operator==(const Grid&) const = default;
};

enum class Resample { Nearest, Bilinear };

// 8-bit grayscale raster, row-major.
struct Raster {
    std::size_t height = 0;
    std::size_t width = 0;
    std::vector<std::uint8_t> pixels;
};

// Throws ContractError unless dims are positive, sizes agree and entries are finite.
void check_tensor(const Tensor3& t);

// Per-channel mean of the gradients.
std::vector<double> gap_weights(const Tensor3& grads);

// Alpha-weighted channel sum before the ReLU.
Grid weighted_sum(std::span<const double> alphas, const Tensor3& maps);

Grid cam(std::span<const double> alphas, const Tensor3& maps);

// Source coordinate (dst + 0.5) * in/out - 0.5, clamped to the edge for
// bilinear; nearest picks floor((dst + 0.5) * in/out).
Grid upsample(const Grid& map, std::size_t out_h, std::size_t out_w, Resample mode);

// Divide by the maximum when it is positive.
Grid normalize_map(const Grid& map);

// gap -> cam -> upsample -> normalize.
Grid gradcam_heatmap(const Tensor3& maps, const Tensor3& grads, std::size_t out_h, std::size_t out_w,
                     Resample mode = Resample::Bilinear);

inline constexpr std::size_t kImageSide = 320;

// Bilinear resize then division by 255. Zero-sized input is an InputError.
Grid preprocess_image(const Raster& image, std::size_t out_h = kImageSide, std::size_t out_w = kImageSide);

// round(255 v), half away from zero; values must lie in [0, 1].
std::vector<std::uint8_t> quantize(const Grid& heatmap);

// Plain-text tensor: "C H W" header then C*H rows of W numbers.
Tensor3 parse_tensor(std::string_view body, std::string_view source = "<tensor>");
std::string format_tensor(const Tensor3& t);
Tensor3 grid_to_tensor(const Grid& g);

std::string heatmap_to_pgm(const Grid& heatmap);

// Reads P2 or P5 with maxval up to 255, rescaling to 0..255.
Raster parse_pgm(std::string_view bytes);

// "320x320" -> {320, 320}; the first number is the height.
std::pair<std::size_t, std::size_t> parse_size(std::string_view spec);

} // namespace radlabel
