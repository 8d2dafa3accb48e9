#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "copulasim/image.hpp"

namespace csim {

struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;
};

enum class DistortionKind { GaussianNoise, GaussianBlur, MotionBlur, Contrast };

/// Seed-deterministic synthetic distortion. Noise generation is counter-based
/// (keyed by pixel index) so output does not depend on evaluation order.
struct DistortionSpec {
    DistortionKind kind = DistortionKind::GaussianNoise;
    double noise_mean = 0.0;
    double noise_sigma = 0.0;
    double blur_sigma = 0.0;
    int blur_kernel = 0;     // 0 = auto: 2*ceil(3*sigma)+1
    int motion_length = 15;  // horizontal shutter-blur length, px
    double contrast_factor = 1.0;
    std::uint64_t seed = 0;
};

Image add_gaussian_noise(const Image& img, double mean, double sigma,
                         std::uint64_t seed);

/// Separable gaussian convolution per channel, edge replication.
/// kernel = 0 selects auto size 2*ceil(3*sigma)+1. Throws InvalidKernel.
Image gaussian_blur(const Image& img, double sigma, int kernel = 0);

/// Horizontal 1-D box motion blur (shutter blur), edge replication.
Image motion_blur(const Image& img, int length);

/// out = clamp(round((in - 128) * factor + 128), 0, 255). factor > 0.
Image adjust_contrast(const Image& img, double factor);

Image apply_distortion(const Image& img, const DistortionSpec& spec);

/// Applies `inner` to the whole image, then writes back only the pixels
/// inside rect (blur may read outside the rect; nothing outside is written).
/// Throws RectOutOfBounds (zero-area rects included).
Image regional_distort(const Image& img, const Rect& rect,
                       const DistortionSpec& inner);

} // namespace csim
