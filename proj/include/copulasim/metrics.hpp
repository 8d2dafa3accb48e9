#pragma once

#include <vector>

#include "copulasim/image.hpp"

namespace csim {

/// Dense real-valued map aligned with an image plane.
struct FloatMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    FloatMap() = default;
    FloatMap(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct SsimConfig {
    double c1 = 6.5025;   // (0.01 * 255)^2
    double c2 = 58.5225;  // (0.03 * 255)^2
    bool global_window = false;
    int window_size = 11;
    double window_sigma = 1.5;
};

struct FsimConfig {
    double t1 = 0.85;
    double t2 = 160.0;
    double epsilon = 1e-4;
    int scales = 4;
    int orientations = 4;
    double min_wavelength = 6.0;
    double mult = 2.0;
    double sigma_on_f = 0.55;
    double d_theta_on_sigma = 1.2;
};

struct IssmConfig {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double e = 1e-10;
    int bins = 256;
};

/// Structural similarity. Color inputs are reduced to BT.601 luma first.
/// global_window evaluates the formula once on whole-image statistics;
/// otherwise the mean of the local map over an 11x11 gaussian window
/// (valid region only).
double ssim(const Image& a, const Image& b, const SsimConfig& cfg = {});

/// Sobel gradient magnitude with edge replication. Single-channel input.
FloatMap gradient_magnitude(const Image& gray);

/// PC(x) = E(x) / (sum of amplitudes + eps), where E sums per-orientation
/// local energy |sum over scales of complex log-Gabor responses|, each
/// orientation weighted by its frequency spread. Values in [0,1].
FloatMap phase_congruency(const Image& gray, const FsimConfig& cfg = {});

/// Feature similarity: PC/GM local similarity pooled by max phase congruency.
double fsim(const Image& a, const Image& b, const FsimConfig& cfg = {});

/// Entropy of the normalized bins x bins joint histogram, bits.
double ehs(const Image& a, const Image& b, int bins = 256);

/// Pearson correlation of the two Sobel gradient-magnitude maps;
/// 1.0 when both maps are constant.
double edge_correlation(const Image& a, const Image& b);

double issm(const Image& a, const Image& b, const IssmConfig& cfg = {},
            const SsimConfig& ssim_cfg = {});

} // namespace csim
