#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "copulasim/bench.hpp"
#include "copulasim/copula.hpp"
#include "copulasim/distortion.hpp"
#include "copulasim/harness.hpp"
#include "copulasim/image_io.hpp"
#include "copulasim/threading.hpp"
#include "copulasim/version.hpp"

namespace fs = std::filesystem;
using namespace csim;

namespace {

struct CommonOpts {
    int patch_size = 8;
    std::string metrics = "all";
    std::uint64_t seed = 0;
    int threads = 0;
    MetricConfigs cfg;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--patch-size", o.patch_size, "CSIM patch size")
        ->default_val(8);
    cmd->add_option("--metrics", o.metrics,
                    "comma list of csim,ssim,fsim,issm or 'all'");
    cmd->add_option("--seed", o.seed, "RNG seed for synthetic distortions");
    cmd->add_option("--threads", o.threads,
                    "worker count (0 = COPULASIM_THREADS or all cores)");
    cmd->add_option("--ssim-c1", o.cfg.ssim.c1, "SSIM C1");
    cmd->add_option("--ssim-c2", o.cfg.ssim.c2, "SSIM C2");
    cmd->add_flag("--ssim-global", o.cfg.ssim.global_window,
                  "whole-image SSIM statistics instead of gaussian windows");
    cmd->add_option("--fsim-t1", o.cfg.fsim.t1, "FSIM T1");
    cmd->add_option("--fsim-t2", o.cfg.fsim.t2, "FSIM T2");
    cmd->add_option("--issm-a", o.cfg.issm.a, "ISSM a");
    cmd->add_option("--issm-b", o.cfg.issm.b, "ISSM b");
    cmd->add_option("--issm-c", o.cfg.issm.c, "ISSM c");
    cmd->add_option("--issm-e", o.cfg.issm.e, "ISSM e");
    cmd->add_option("--issm-bins", o.cfg.issm.bins, "ISSM histogram bins");
}

CsvMeta base_meta(const CommonOpts& o) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(config_hash(o.cfg, o.seed)));
    return {{"tool", std::string("copulasim ") + kVersion},
            {"seed", std::to_string(o.seed)},
            {"patch_size", std::to_string(o.patch_size)},
            {"config_hash", hash}};
}

void warn_partial_patches(const Image& img, int patch_size) {
    if (img.width % patch_size != 0 || img.height % patch_size != 0) {
        std::cerr << "warning: image " << shape_string(img)
                  << " is not a multiple of patch size " << patch_size
                  << "; trailing partial patches are dropped\n";
    }
}

std::vector<Image> load_frames(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string ext = e.path().extension().string();
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp")
            paths.push_back(e.path());
    }
    std::sort(paths.begin(), paths.end());
    std::vector<Image> frames;
    frames.reserve(paths.size());
    for (const auto& p : paths) frames.push_back(load_image(p.string()));
    return frames;
}

std::optional<std::pair<int, int>> parse_resize(const std::string& s) {
    if (s.empty()) return std::nullopt;
    int w = 0, h = 0;
    if (std::sscanf(s.c_str(), "%dx%d", &w, &h) != 2 || w < 1 || h < 1)
        throw Error("bad --resize value (expected WxH): " + s);
    return std::make_pair(w, h);
}

void write_map_outputs(const SimilarityMap& map, const Image& reference,
                       int patch_size, const std::string& out_csv,
                       const std::string& out_png) {
    try {
        if (!out_csv.empty()) {
            std::ofstream csv(out_csv);
            if (!csv) throw Error("cannot open for writing: " + out_csv);
            char cell[32];
            for (int r = 0; r < map.grid_rows; ++r) {
                for (int c = 0; c < map.grid_cols; ++c) {
                    std::snprintf(cell, sizeof(cell), "%.6f", map.at(r, c));
                    csv << cell << (c + 1 < map.grid_cols ? "," : "\n");
                }
            }
        }
        if (!out_png.empty()) {
            // Nearest-neighbor upscale of the patch grid to input resolution.
            Image heat(reference.width, reference.height, 1);
            for (int y = 0; y < heat.height; ++y) {
                const int r = std::min(y / patch_size, map.grid_rows - 1);
                for (int x = 0; x < heat.width; ++x) {
                    const int c = std::min(x / patch_size, map.grid_cols - 1);
                    heat.at(x, y) = static_cast<std::uint8_t>(
                        std::lround(map.at(r, c) * 255.0));
                }
            }
            save_image(heat, out_png);
        }
    } catch (...) {
        std::error_code ec;
        if (!out_csv.empty()) fs::remove(out_csv, ec);
        if (!out_png.empty()) fs::remove(out_png, ec);
        throw;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"copulasim: copula-based image similarity (CSIM) plus "
                 "SSIM/FSIM/ISSM baselines"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("copulasim ") + kVersion);

    CommonOpts o;

    // compare
    std::string path_a, path_b;
    auto* compare = app.add_subcommand("compare", "score one image pair");
    compare->add_option("imageA", path_a)->required();
    compare->add_option("imageB", path_b)->required();
    add_common(compare, o);

    // map
    std::string map_csv, map_png;
    auto* map_cmd = app.add_subcommand("map", "per-patch CSIM similarity map");
    map_cmd->add_option("imageA", path_a)->required();
    map_cmd->add_option("imageB", path_b)->required();
    map_cmd->add_option("--out-csv", map_csv, "similarity map CSV");
    map_cmd->add_option("--out-png", map_png, "grayscale heatmap PNG");
    add_common(map_cmd, o);

    // sweep
    std::string sweep_image, out_path = "records.csv", json_path;
    std::vector<double> blur_sigmas{0, 2, 4, 8};
    std::vector<double> noise_sigmas{0, 5, 10, 15, 20};
    double noise_mean = 5.0;
    auto* sweep = app.add_subcommand(
        "sweep", "noise/blur sensitivity sweeps on one image");
    sweep->add_option("image", sweep_image)->required();
    sweep->add_option("--blur-sigmas", blur_sigmas, "blur sigma values");
    sweep->add_option("--noise-sigmas", noise_sigmas, "noise sigma values");
    sweep->add_option("--noise-mean", noise_mean, "noise mean");
    sweep->add_option("--out", out_path, "output CSV path");
    sweep->add_option("--json", json_path, "optional JSON mirror of the CSV");
    add_common(sweep, o);

    // video
    std::string frames_dir, resize_spec;
    auto* video = app.add_subcommand(
        "video", "frame-vs-reference series over a directory of frames");
    video->add_option("frames_dir", frames_dir)->required();
    video->add_option("--resize", resize_spec, "resize frames first, WxH");
    video->add_option("--out", out_path, "output CSV path");
    video->add_option("--json", json_path, "optional JSON mirror of the CSV");
    add_common(video, o);

    // dataset
    std::string dataset_root;
    auto* dataset = app.add_subcommand(
        "dataset", "evaluate a CSIQ-layout dataset directory");
    dataset->add_option("root", dataset_root)->required();
    dataset->add_option("--out", out_path, "output CSV path");
    dataset->add_option("--json", json_path, "optional JSON mirror of the CSV");
    add_common(dataset, o);

    // bench
    std::vector<int> bench_sizes{4, 8, 16, 32, 64};
    int bench_reps = 5;
    auto* bench = app.add_subcommand(
        "bench", "patch-size timing sweep of csim_score");
    bench->add_option("imageA", path_a)->required();
    bench->add_option("imageB", path_b)->required();
    bench->add_option("--sizes", bench_sizes, "patch sizes to time");
    bench->add_option("--reps", bench_reps, "timed repetitions per size");
    bench->add_option("--out", out_path, "output CSV path");
    add_common(bench, o);

    CLI11_PARSE(app, argc, argv);
    o.cfg.patch_size = o.patch_size;

    try {
        if (compare->parsed()) {
            const Image a = load_image(path_a);
            const Image b = load_image(path_b);
            warn_partial_patches(a, o.patch_size);
            for (Metric m : parse_metrics(o.metrics)) {
                const double s = evaluate_metric(m, a, b, o.cfg);
                std::printf("%s\t%.6f\n", metric_name(m).c_str(), s);
            }
        } else if (map_cmd->parsed()) {
            const Image a = load_image(path_a);
            const Image b = load_image(path_b);
            warn_partial_patches(a, o.patch_size);
            const SimilarityMap map = csim_map(a, b, o.patch_size);
            write_map_outputs(map, a, o.patch_size, map_csv, map_png);
            std::printf("map %dx%d written\n", map.grid_rows, map.grid_cols);
        } else if (sweep->parsed()) {
            const Image img = load_image(sweep_image);
            warn_partial_patches(img, o.patch_size);
            const auto records =
                sweep_eval(img, blur_sigmas, noise_sigmas, noise_mean,
                           parse_metrics(o.metrics), o.seed, o.cfg, o.threads);
            CsvMeta meta = base_meta(o);
            meta.emplace_back("noise_mean", std::to_string(noise_mean));
            meta.emplace_back("grid_order", "noise-then-blur");
            write_records_csv(out_path, records, meta);
            if (!json_path.empty())
                write_records_json(json_path, records, meta);
            std::printf("%s: %zu records\n", out_path.c_str(), records.size());
        } else if (video->parsed()) {
            const auto frames = load_frames(frames_dir);
            const auto metrics = parse_metrics(o.metrics);
            const auto series = video_eval(frames, metrics,
                                           parse_resize(resize_spec), o.cfg,
                                           o.threads);
            std::vector<MetricRecord> records;
            for (std::size_t mi = 0; mi < metrics.size(); ++mi)
                for (std::size_t f = 0; f < series.frame_index.size(); ++f)
                    records.push_back({"video", "frame",
                                       static_cast<double>(series.frame_index[f]),
                                       metric_name(metrics[mi]),
                                       series.scores[mi][f], 0.0});
            CsvMeta meta = base_meta(o);
            meta.emplace_back("resize_kernel", "bilinear");
            if (!resize_spec.empty()) meta.emplace_back("resize", resize_spec);
            write_records_csv(out_path, records, meta);
            if (!json_path.empty())
                write_records_json(json_path, records, meta);
            std::printf("%s: %zu records\n", out_path.c_str(), records.size());
        } else if (dataset->parsed()) {
            std::vector<std::string> warnings;
            const auto records =
                dataset_eval(dataset_root, parse_metrics(o.metrics), o.cfg,
                             o.threads, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            write_records_csv(out_path, records, base_meta(o));
            if (!json_path.empty())
                write_records_json(json_path, records, base_meta(o));
            std::printf("%s: %zu records\n", out_path.c_str(), records.size());
        } else if (bench->parsed()) {
            const Image a = load_image(path_a);
            const Image b = load_image(path_b);
            const auto records = patch_sweep_timing(a, b, bench_sizes, bench_reps);
            CsvMeta meta = base_meta(o);
            meta.emplace_back("threads", "1");
            write_bench_csv(out_path, records, meta);
            if (records.size() >= 4) {
                try {
                    const auto report = fit_complexity_trend(records);
                    std::printf("best trend: %s%s\n",
                                trend_model_name(report.best).c_str(),
                                report.indistinguishable
                                    ? " (models indistinguishable)"
                                    : "");
                } catch (const InsufficientData&) {
                }
            }
            std::printf("%s: %zu records\n", out_path.c_str(), records.size());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
