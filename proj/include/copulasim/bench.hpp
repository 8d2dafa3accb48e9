#pragma once

#include <string>
#include <vector>

#include "copulasim/image.hpp"

namespace csim {

struct BenchRecord {
    int patch_size = 0;
    int width = 0;
    int height = 0;
    int repetitions = 0;
    double median_time_s = 0.0;
    double score = 0.0;
};

/// One warm-up run then `reps` timed runs of csim_score per patch size;
/// median wall time reported. Single-threaded on purpose.
std::vector<BenchRecord> patch_sweep_timing(const Image& a, const Image& b,
                                            const std::vector<int>& sizes,
                                            int reps);

enum class TrendModel { LogP, LinearP, InverseP2 };

struct ModelFit {
    TrendModel model;
    double scale = 0.0;  // c
    double offset = 0.0; // d
    double rss = 0.0;    // residual sum of squares
};

struct TrendReport {
    std::vector<ModelFit> fits; // one per candidate model
    TrendModel best;
    bool indistinguishable = false; // all models collapse to a constant
};

/// Least-squares fit of median time against {c*log P + d, c*P + d,
/// c/P^2 + d}. Needs >= 4 records spanning >= 8x in P, else InsufficientData.
TrendReport fit_complexity_trend(const std::vector<BenchRecord>& records);

std::string trend_model_name(TrendModel m);

void write_bench_csv(const std::string& path,
                     const std::vector<BenchRecord>& records,
                     const std::vector<std::pair<std::string, std::string>>& meta);

} // namespace csim
