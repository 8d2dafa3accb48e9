#include "copulasim/distortion.hpp"

#include <algorithm>
#include <cmath>

namespace csim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double to_unit(std::uint64_t bits) {
    // (0,1]: zero is excluded so log() below stays finite.
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Counter-based standard normal keyed by (seed, element index): output is
// independent of evaluation order.
double normal_sample(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t s = splitmix64(seed ^ splitmix64(index));
    const double u1 = to_unit(s);
    const double u2 = to_unit(splitmix64(s));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

Image add_gaussian_noise(const Image& img, double mean, double sigma,
                         std::uint64_t seed) {
    if (sigma < 0.0) throw Error("noise sigma must be >= 0");
    Image out = img;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double n =
            sigma > 0.0 ? mean + sigma * normal_sample(seed, i) : mean;
        out.data[i] = clamp_round(img.data[i] + n);
    }
    return out;
}

Image gaussian_blur(const Image& img, double sigma, int kernel) {
    if (sigma < 0.0) throw Error("blur sigma must be >= 0");
    if (sigma == 0.0) return img;
    int k = kernel;
    if (k == 0) k = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
    if (k < 1 || k % 2 == 0)
        throw InvalidKernel("kernel size must be odd and >= 1, got " +
                            std::to_string(k));

    std::vector<double> w(k);
    const int half = k / 2;
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        const double d = i - half;
        w[i] = std::exp(-0.5 * d * d / (sigma * sigma));
        sum += w[i];
    }
    for (double& v : w) v /= sum;

    // Horizontal then vertical pass, edge replication, float throughout.
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double s = 0.0;
                for (int i = 0; i < k; ++i) {
                    const int xi = std::clamp(x + i - half, 0, img.width - 1);
                    s += w[i] * img.at(xi, y, c);
                }
                tmp[(static_cast<std::size_t>(y) * img.width + x) * img.channels + c] = s;
            }
    Image out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double s = 0.0;
                for (int i = 0; i < k; ++i) {
                    const int yi = std::clamp(y + i - half, 0, img.height - 1);
                    s += w[i] *
                         tmp[(static_cast<std::size_t>(yi) * img.width + x) * img.channels + c];
                }
                out.at(x, y, c) = clamp_round(s);
            }
    return out;
}

Image motion_blur(const Image& img, int length) {
    if (length < 1) throw InvalidKernel("motion blur length must be >= 1");
    if (length == 1) return img;
    Image out(img.width, img.height, img.channels);
    const int half = length / 2;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < img.channels; ++c) {
                double s = 0.0;
                for (int i = 0; i < length; ++i) {
                    const int xi = std::clamp(x + i - half, 0, img.width - 1);
                    s += img.at(xi, y, c);
                }
                out.at(x, y, c) = clamp_round(s / length);
            }
    return out;
}

Image adjust_contrast(const Image& img, double factor) {
    if (factor <= 0.0) throw Error("contrast factor must be > 0");
    Image out = img;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = clamp_round((img.data[i] - 128.0) * factor + 128.0);
    return out;
}

Image apply_distortion(const Image& img, const DistortionSpec& spec) {
    switch (spec.kind) {
        case DistortionKind::GaussianNoise:
            return add_gaussian_noise(img, spec.noise_mean, spec.noise_sigma,
                                      spec.seed);
        case DistortionKind::GaussianBlur:
            return gaussian_blur(img, spec.blur_sigma, spec.blur_kernel);
        case DistortionKind::MotionBlur:
            return motion_blur(img, spec.motion_length);
        case DistortionKind::Contrast:
            return adjust_contrast(img, spec.contrast_factor);
    }
    throw Error("unknown distortion kind");
}

Image regional_distort(const Image& img, const Rect& rect,
                       const DistortionSpec& inner) {
    if (rect.w <= 0 || rect.h <= 0 || rect.x < 0 || rect.y < 0 ||
        rect.x + rect.w > img.width || rect.y + rect.h > img.height) {
        throw RectOutOfBounds("rect " + std::to_string(rect.x) + "," +
                              std::to_string(rect.y) + " " +
                              std::to_string(rect.w) + "x" +
                              std::to_string(rect.h) + " outside image " +
                              shape_string(img));
    }
    const Image distorted = apply_distortion(img, inner);
    Image out = img;
    for (int y = rect.y; y < rect.y + rect.h; ++y)
        for (int x = rect.x; x < rect.x + rect.w; ++x)
            for (int c = 0; c < img.channels; ++c)
                out.at(x, y, c) = distorted.at(x, y, c);
    return out;
}

} // namespace csim
