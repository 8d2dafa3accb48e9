#include "copulasim/image.hpp"

#include <algorithm>
#include <cmath>

namespace csim {

std::string shape_string(const Image& img) {
    return std::to_string(img.width) + "x" + std::to_string(img.height) + "x" +
           std::to_string(img.channels);
}

Image to_grayscale(const Image& img) {
    if (img.channels == 1) return img;
    Image out(img.width, img.height, 1);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.data[i] = static_cast<std::uint8_t>(
            std::lround(0.299 * r + 0.587 * g + 0.114 * b));
    }
    return out;
}

void validate_pair(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw DimensionMismatch("image shapes differ: " + shape_string(a) +
                                " vs " + shape_string(b));
    }
}

Image resize_bilinear(const Image& img, int new_width, int new_height) {
    if (new_width < 1 || new_height < 1)
        throw DimensionMismatch("resize target must be positive");
    if (new_width == img.width && new_height == img.height) return img;

    Image out(new_width, new_height, img.channels);
    const double sx = static_cast<double>(img.width) / new_width;
    const double sy = static_cast<double>(img.height) / new_height;
    for (int y = 0; y < new_height; ++y) {
        // Pixel-center mapping.
        const double fy = std::max(0.0, (y + 0.5) * sy - 0.5);
        const int y0 = std::min(static_cast<int>(fy), img.height - 1);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < new_width; ++x) {
            const double fx = std::max(0.0, (x + 0.5) * sx - 0.5);
            const int x0 = std::min(static_cast<int>(fx), img.width - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(x0, y0, c) * (1 - wx) + img.at(x1, y0, c) * wx;
                const double bot = img.at(x0, y1, c) * (1 - wx) + img.at(x1, y1, c) * wx;
                const double v = top * (1 - wy) + bot * wy;
                out.at(x, y, c) = static_cast<std::uint8_t>(
                    std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

} // namespace csim
