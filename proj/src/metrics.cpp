#include "copulasim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>

#include <fftw3.h>

namespace csim {

namespace {

std::vector<double> gaussian_kernel_1d(int size, double sigma) {
    std::vector<double> k(size);
    const int half = size / 2;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - half;
        k[i] = std::exp(-0.5 * d * d / (sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

struct Plane {
    int width = 0, height = 0;
    std::vector<double> v;
    Plane(int w, int h) : width(w), height(h), v(static_cast<std::size_t>(w) * h) {}
    double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

// Separable convolution restricted to the valid region (no padding), so the
// windowed statistics are exactly gaussian-weighted window sums.
Plane valid_convolve(const Plane& src, const std::vector<double>& k) {
    const int ks = static_cast<int>(k.size());
    Plane tmp(src.width - ks + 1, src.height);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < tmp.width; ++x) {
            double s = 0.0;
            for (int i = 0; i < ks; ++i) s += k[i] * src.at(x + i, y);
            tmp.at(x, y) = s;
        }
    Plane out(tmp.width, src.height - ks + 1);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            double s = 0.0;
            for (int i = 0; i < ks; ++i) s += k[i] * tmp.at(x, y + i);
            out.at(x, y) = s;
        }
    return out;
}

Plane to_plane(const Image& gray) {
    Plane p(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) p.at(x, y) = gray.at(x, y);
    return p;
}

double ssim_formula(double mu1, double mu2, double var1, double var2,
                    double cov, double c1, double c2) {
    return ((2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)) /
           ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
}

} // namespace

double ssim(const Image& a, const Image& b, const SsimConfig& cfg) {
    validate_pair(a, b);
    const Image ga = to_grayscale(a);
    const Image gb = to_grayscale(b);

    const bool use_global = cfg.global_window ||
                            a.width < cfg.window_size ||
                            a.height < cfg.window_size;
    if (use_global) {
        const std::size_t n = ga.pixel_count();
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s1 += ga.data[i];
            s2 += gb.data[i];
        }
        const double mu1 = s1 / n, mu2 = s2 / n;
        double v1 = 0.0, v2 = 0.0, cov = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d1 = ga.data[i] - mu1;
            const double d2 = gb.data[i] - mu2;
            v1 += d1 * d1;
            v2 += d2 * d2;
            cov += d1 * d2;
        }
        return ssim_formula(mu1, mu2, v1 / n, v2 / n, cov / n, cfg.c1, cfg.c2);
    }

    const auto kernel = gaussian_kernel_1d(cfg.window_size, cfg.window_sigma);
    const Plane p1 = to_plane(ga);
    const Plane p2 = to_plane(gb);
    Plane p1sq(p1.width, p1.height), p2sq(p1.width, p1.height),
        p12(p1.width, p1.height);
    for (std::size_t i = 0; i < p1.v.size(); ++i) {
        p1sq.v[i] = p1.v[i] * p1.v[i];
        p2sq.v[i] = p2.v[i] * p2.v[i];
        p12.v[i] = p1.v[i] * p2.v[i];
    }
    const Plane mu1 = valid_convolve(p1, kernel);
    const Plane mu2 = valid_convolve(p2, kernel);
    const Plane e1sq = valid_convolve(p1sq, kernel);
    const Plane e2sq = valid_convolve(p2sq, kernel);
    const Plane e12 = valid_convolve(p12, kernel);

    double total = 0.0;
    for (std::size_t i = 0; i < mu1.v.size(); ++i) {
        const double m1 = mu1.v[i], m2 = mu2.v[i];
        total += ssim_formula(m1, m2, e1sq.v[i] - m1 * m1, e2sq.v[i] - m2 * m2,
                              e12.v[i] - m1 * m2, cfg.c1, cfg.c2);
    }
    return total / static_cast<double>(mu1.v.size());
}

FloatMap gradient_magnitude(const Image& gray) {
    if (gray.channels != 1)
        throw DimensionMismatch("gradient_magnitude expects 1 channel");
    FloatMap gm(gray.width, gray.height);
    auto px = [&](int x, int y) {
        x = std::clamp(x, 0, gray.width - 1);
        y = std::clamp(y, 0, gray.height - 1);
        return static_cast<double>(gray.at(x, y));
    };
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x) {
            const double gx = -px(x - 1, y - 1) + px(x + 1, y - 1) -
                              2 * px(x - 1, y) + 2 * px(x + 1, y) -
                              px(x - 1, y + 1) + px(x + 1, y + 1);
            const double gy = -px(x - 1, y - 1) - 2 * px(x, y - 1) -
                              px(x + 1, y - 1) + px(x - 1, y + 1) +
                              2 * px(x, y + 1) + px(x + 1, y + 1);
            gm.at(x, y) = std::sqrt(gx * gx + gy * gy);
        }
    return gm;
}

namespace {

// FFTW planning is not thread-safe.
std::mutex g_fftw_mutex;

struct FftwBuffer {
    fftw_complex* data = nullptr;
    explicit FftwBuffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {}
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

} // namespace

FloatMap phase_congruency(const Image& gray, const FsimConfig& cfg) {
    if (gray.channels != 1)
        throw DimensionMismatch("phase_congruency expects 1 channel");
    const int w = gray.width, h = gray.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;

    FftwBuffer in(n), freq(n), resp(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.data[i][0] = gray.data[i];
        in.data[i][1] = 0.0;
    }
    fftw_plan fwd, inv;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fwd = fftw_plan_dft_2d(h, w, in.data, freq.data, FFTW_FORWARD,
                               FFTW_ESTIMATE);
        inv = fftw_plan_dft_2d(h, w, in.data, resp.data, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    // Normalized frequency grid, DC at (0,0).
    std::vector<double> radius(n), theta(n);
    for (int y = 0; y < h; ++y) {
        const double fy = (y <= h / 2 ? y : y - h) / static_cast<double>(h);
        for (int x = 0; x < w; ++x) {
            const double fx = (x <= w / 2 ? x : x - w) / static_cast<double>(w);
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            radius[i] = std::sqrt(fx * fx + fy * fy);
            theta[i] = std::atan2(-fy, fx);
        }
    }
    radius[0] = 1.0; // keep log() finite; the DC gain is zeroed anyway

    std::vector<double> energy(n, 0.0), sum_amp(n, 0.0);
    std::vector<double> o_re(n), o_im(n), o_amp(n), o_max(n);
    const double log_sigma = std::log(cfg.sigma_on_f);
    const double theta_sigma =
        M_PI / cfg.orientations / cfg.d_theta_on_sigma;
    // Frequency-spread sigmoid (Kovesi): responses concentrated in a single
    // scale (smooth gradients, pure tones) carry little congruency evidence.
    const double spread_cutoff = 0.5, spread_gain = 10.0;

    for (int o = 0; o < cfg.orientations; ++o) {
        const double phi = o * M_PI / cfg.orientations;
        const double cphi = std::cos(phi), sphi = std::sin(phi);
        std::fill(o_re.begin(), o_re.end(), 0.0);
        std::fill(o_im.begin(), o_im.end(), 0.0);
        std::fill(o_amp.begin(), o_amp.end(), 0.0);
        std::fill(o_max.begin(), o_max.end(), 0.0);
        for (int s = 0; s < cfg.scales; ++s) {
            const double wavelength =
                cfg.min_wavelength * std::pow(cfg.mult, s);
            const double f0 = 1.0 / wavelength;
            for (std::size_t i = 0; i < n; ++i) {
                const double lr = std::log(radius[i] / f0);
                double g = std::exp(-lr * lr / (2.0 * log_sigma * log_sigma));
                const double ct = std::cos(theta[i]), st = std::sin(theta[i]);
                const double dtheta = std::abs(
                    std::atan2(st * cphi - ct * sphi, ct * cphi + st * sphi));
                g *= std::exp(-dtheta * dtheta /
                              (2.0 * theta_sigma * theta_sigma));
                in.data[i][0] = freq.data[i][0] * g;
                in.data[i][1] = freq.data[i][1] * g;
            }
            in.data[0][0] = 0.0;
            in.data[0][1] = 0.0;
            fftw_execute(inv);
            for (std::size_t i = 0; i < n; ++i) {
                const double re = resp.data[i][0] / static_cast<double>(n);
                const double im = resp.data[i][1] / static_cast<double>(n);
                o_re[i] += re;
                o_im[i] += im;
                const double amp = std::sqrt(re * re + im * im);
                o_amp[i] += amp;
                o_max[i] = std::max(o_max[i], amp);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            double width = 0.0;
            if (o_max[i] > 0.0 && cfg.scales > 1)
                width = (o_amp[i] / o_max[i] - 1.0) / (cfg.scales - 1);
            const double weight =
                1.0 / (1.0 + std::exp(spread_gain * (spread_cutoff - width)));
            energy[i] +=
                weight * std::sqrt(o_re[i] * o_re[i] + o_im[i] * o_im[i]);
            sum_amp[i] += o_amp[i];
        }
    }
    {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }

    FloatMap pc(w, h);
    for (std::size_t i = 0; i < n; ++i)
        pc.values[i] = energy[i] / (sum_amp[i] + cfg.epsilon);
    return pc;
}

double fsim(const Image& a, const Image& b, const FsimConfig& cfg) {
    validate_pair(a, b);
    const Image ga = to_grayscale(a);
    const Image gb = to_grayscale(b);

    const FloatMap pc1 = phase_congruency(ga, cfg);
    const FloatMap pc2 = phase_congruency(gb, cfg);
    const FloatMap gm1 = gradient_magnitude(ga);
    const FloatMap gm2 = gradient_magnitude(gb);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pc1.values.size(); ++i) {
        const double p1 = pc1.values[i], p2 = pc2.values[i];
        const double g1 = gm1.values[i], g2 = gm2.values[i];
        const double s_pc =
            (2.0 * p1 * p2 + cfg.t1) / (p1 * p1 + p2 * p2 + cfg.t1);
        const double s_g =
            (2.0 * g1 * g2 + cfg.t2) / (g1 * g1 + g2 * g2 + cfg.t2);
        const double pcm = std::max(p1, p2);
        num += s_pc * s_g * pcm;
        den += pcm;
    }
    if (den == 0.0) {
        if (ga.data == gb.data) return 1.0; // identical constant images
        throw DegenerateWeight("phase congruency vanished on both images");
    }
    return num / den;
}

double ehs(const Image& a, const Image& b, int bins) {
    validate_pair(a, b);
    const Image ga = to_grayscale(a);
    const Image gb = to_grayscale(b);

    std::vector<double> hist(static_cast<std::size_t>(bins) * bins, 0.0);
    const std::size_t n = ga.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const int ba = ga.data[i] * bins / 256;
        const int bb = gb.data[i] * bins / 256;
        hist[static_cast<std::size_t>(ba) * bins + bb] += 1.0;
    }
    double entropy = 0.0;
    for (double c : hist) {
        if (c > 0.0) {
            const double t = c / static_cast<double>(n);
            entropy -= t * std::log2(t);
        }
    }
    return entropy;
}

double edge_correlation(const Image& a, const Image& b) {
    validate_pair(a, b);
    const FloatMap gma = gradient_magnitude(to_grayscale(a));
    const FloatMap gmb = gradient_magnitude(to_grayscale(b));

    const std::size_t n = gma.values.size();
    const double mean_a =
        std::accumulate(gma.values.begin(), gma.values.end(), 0.0) / n;
    const double mean_b =
        std::accumulate(gmb.values.begin(), gmb.values.end(), 0.0) / n;
    double va = 0.0, vb = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = gma.values[i] - mean_a;
        const double db = gmb.values[i] - mean_b;
        va += da * da;
        vb += db * db;
        cov += da * db;
    }
    if (va == 0.0 && vb == 0.0) return 1.0; // both edge maps constant
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

double issm(const Image& a, const Image& b, const IssmConfig& cfg,
            const SsimConfig& ssim_cfg) {
    validate_pair(a, b);
    const double corr = edge_correlation(a, b);
    const double entropy = ehs(a, b, cfg.bins);
    const double s = ssim(a, b, ssim_cfg);
    return (corr * entropy * (cfg.a + cfg.b) + cfg.e) /
           (cfg.a * corr * entropy + cfg.b * entropy + cfg.c * s + cfg.e);
}

} // namespace csim
