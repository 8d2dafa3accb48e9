#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copulasim/image.hpp"
#include "copulasim/metrics.hpp"

namespace csim {

enum class Metric { CSIM, SSIM, FSIM, ISSM };

/// Fixed presentation order: CSIM, SSIM, FSIM, ISSM.
const std::vector<Metric>& all_metrics();
std::string metric_name(Metric m);
std::vector<Metric> parse_metrics(const std::string& spec); // "all" or comma list

struct MetricConfigs {
    int patch_size = 8;
    SsimConfig ssim;
    FsimConfig fsim;
    IssmConfig issm;
};

double evaluate_metric(Metric m, const Image& a, const Image& b,
                       const MetricConfigs& cfg);

struct MetricRecord {
    std::string image_id;
    std::string distortion;
    double level = 0.0;
    std::string metric;
    double score = 0.0;
    double wall_time_s = 0.0;
};

/// 1-D blur sweep, 1-D noise sweep, and the 2-D grid (noise applied first,
/// then blur). Deterministic under a fixed seed.
std::vector<MetricRecord> sweep_eval(const Image& img,
                                     const std::vector<double>& blur_sigmas,
                                     const std::vector<double>& noise_sigmas,
                                     double noise_mean,
                                     const std::vector<Metric>& metrics,
                                     std::uint64_t seed,
                                     const MetricConfigs& cfg = {},
                                     int threads = 0);

struct VideoSeries {
    std::vector<int> frame_index;
    std::vector<Metric> metrics;
    std::vector<std::vector<double>> scores; // scores[m][frame]
};

/// Frame 0 is the reference; every frame (the reference included) is scored
/// against it. Optional bilinear resize applied to all frames first.
VideoSeries video_eval(const std::vector<Image>& frames,
                       const std::vector<Metric>& metrics,
                       std::optional<std::pair<int, int>> resize_to,
                       const MetricConfigs& cfg = {}, int threads = 0);

/// Walks a CSIQ-style tree: src_imgs/ with originals plus per-distortion
/// folders (awgn, blur, contrast, fnoise, jpeg, jpeg2000; case-insensitive,
/// directly under root or under dst_imgs/). Distorted files match their
/// original by filename stem prefix; level parsed from the filename suffix.
/// Unknown files are skipped with a warning. Throws LayoutNotRecognized
/// when no pair matches.
std::vector<MetricRecord> dataset_eval(const std::string& root,
                                       const std::vector<Metric>& metrics,
                                       const MetricConfigs& cfg = {},
                                       int threads = 0,
                                       std::vector<std::string>* warnings = nullptr);

struct AggregateCell {
    std::string metric;
    std::string distortion;
    double mean_score = 0.0;
    int count = 0;
};

std::vector<AggregateCell> aggregate_by_distortion(
    const std::vector<MetricRecord>& records);

struct CorrelationMatrix {
    std::vector<std::string> metrics;
    std::vector<double> coefficients; // row-major |metrics| x |metrics|

    double at(int i, int j) const {
        return coefficients[static_cast<std::size_t>(i) * metrics.size() + j];
    }
};

/// Pearson coefficients over (image_id, distortion, level)-aligned scores.
/// Throws InsufficientData below 2 aligned observations.
CorrelationMatrix correlation_matrix(const std::vector<MetricRecord>& records);

/// Metadata lines ("# key: value") written ahead of the CSV header.
using CsvMeta = std::vector<std::pair<std::string, std::string>>;

/// Records are sorted by (image_id, distortion, level, metric) so outputs
/// are byte-stable.
void write_records_csv(const std::string& path,
                       const std::vector<MetricRecord>& records,
                       const CsvMeta& meta);
void write_records_json(const std::string& path,
                        const std::vector<MetricRecord>& records,
                        const CsvMeta& meta);

std::uint64_t config_hash(const MetricConfigs& cfg, std::uint64_t seed);

} // namespace csim
