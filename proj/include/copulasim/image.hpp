#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copulasim/errors.hpp"

namespace csim {

/// 8-bit raster image, row-major, channel-interleaved. 1 or 3 channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// BT.601 luma conversion; grayscale input is returned unchanged.
Image to_grayscale(const Image& img);

/// Throws DimensionMismatch (message carries both shapes) unless shapes match.
void validate_pair(const Image& a, const Image& b);

/// Bilinear resize; used by the video harness to downscale frames.
Image resize_bilinear(const Image& img, int new_width, int new_height);

std::string shape_string(const Image& img);

} // namespace csim
