#include "copulasim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "copulasim/copula.hpp"
#include "copulasim/errors.hpp"

namespace csim {

std::vector<BenchRecord> patch_sweep_timing(const Image& a, const Image& b,
                                            const std::vector<int>& sizes,
                                            int reps) {
    if (reps < 3) throw Error("benchmark needs reps >= 3");
    const int n_sizes = static_cast<int>(sizes.size());
    std::vector<double> scores(n_sizes);
    std::vector<std::vector<double>> times(n_sizes);
    for (int i = 0; i < n_sizes; ++i) {
        volatile double sink = csim_score(a, b, sizes[i]); // warm-up
        scores[i] = sink;
        times[i].reserve(reps);
    }
    // Interleave repetitions across sizes so drifting background load biases
    // every patch size equally instead of masquerading as a trend.
    for (int r = 0; r < reps; ++r) {
        for (int i = 0; i < n_sizes; ++i) {
            const auto t0 = std::chrono::steady_clock::now();
            volatile double sink = csim_score(a, b, sizes[i]);
            const auto t1 = std::chrono::steady_clock::now();
            (void)sink;
            times[i].push_back(std::chrono::duration<double>(t1 - t0).count());
        }
    }
    std::vector<BenchRecord> out;
    out.reserve(sizes.size());
    for (int i = 0; i < n_sizes; ++i) {
        std::sort(times[i].begin(), times[i].end());
        const double median =
            reps % 2 == 1
                ? times[i][reps / 2]
                : 0.5 * (times[i][reps / 2 - 1] + times[i][reps / 2]);
        out.push_back({sizes[i], a.width, a.height, reps, median, scores[i]});
    }
    return out;
}

std::string trend_model_name(TrendModel m) {
    switch (m) {
        case TrendModel::LogP: return "c*log(P)+d";
        case TrendModel::LinearP: return "c*P+d";
        case TrendModel::InverseP2: return "c/P^2+d";
    }
    return "?";
}

TrendReport fit_complexity_trend(const std::vector<BenchRecord>& records) {
    if (records.size() < 4)
        throw InsufficientData("trend fit needs >= 4 records");
    int pmin = records.front().patch_size, pmax = pmin;
    for (const auto& r : records) {
        pmin = std::min(pmin, r.patch_size);
        pmax = std::max(pmax, r.patch_size);
    }
    if (pmax < 8 * pmin)
        throw InsufficientData("trend fit needs >= 8x span in patch size");

    auto fit_model = [&](TrendModel model) {
        // Simple linear least squares of t against the model's basis g(P).
        const double n = static_cast<double>(records.size());
        double sg = 0.0, st = 0.0, sgg = 0.0, sgt = 0.0;
        auto basis = [&](double p) {
            switch (model) {
                case TrendModel::LogP: return std::log(p);
                case TrendModel::LinearP: return p;
                case TrendModel::InverseP2: return 1.0 / (p * p);
            }
            return 0.0;
        };
        for (const auto& r : records) {
            const double g = basis(r.patch_size);
            sg += g;
            st += r.median_time_s;
            sgg += g * g;
            sgt += g * r.median_time_s;
        }
        const double denom = n * sgg - sg * sg;
        ModelFit fit{model, 0.0, st / n, 0.0};
        if (denom != 0.0) {
            fit.scale = (n * sgt - sg * st) / denom;
            fit.offset = (st - fit.scale * sg) / n;
        }
        for (const auto& r : records) {
            const double res =
                r.median_time_s - (fit.scale * basis(r.patch_size) + fit.offset);
            fit.rss += res * res;
        }
        return fit;
    };

    TrendReport report;
    report.fits = {fit_model(TrendModel::LogP), fit_model(TrendModel::LinearP),
                   fit_model(TrendModel::InverseP2)};
    report.best = report.fits.front().model;
    double best_rss = report.fits.front().rss;
    for (const auto& f : report.fits) {
        if (f.rss < best_rss) {
            best_rss = f.rss;
            report.best = f.model;
        }
    }
    // Constant-time data: every model collapses onto the mean.
    double tmin = records.front().median_time_s, tmax = tmin;
    for (const auto& r : records) {
        tmin = std::min(tmin, r.median_time_s);
        tmax = std::max(tmax, r.median_time_s);
    }
    report.indistinguishable = (tmax - tmin) <= 1e-12 ||
                               std::all_of(report.fits.begin(), report.fits.end(),
                                           [&](const ModelFit& f) {
                                               return std::abs(f.scale) < 1e-15;
                                           });
    return report;
}

void write_bench_csv(
    const std::string& path, const std::vector<BenchRecord>& records,
    const std::vector<std::pair<std::string, std::string>>& meta) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
    out << "patch_size,width,height,reps,median_time_s,score\n";
    char line[160];
    for (const auto& r : records) {
        std::snprintf(line, sizeof(line), "%d,%d,%d,%d,%.9f,%.6f\n",
                      r.patch_size, r.width, r.height, r.repetitions,
                      r.median_time_s, r.score);
        out << line;
    }
}

} // namespace csim
