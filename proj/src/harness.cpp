#include "copulasim/harness.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "copulasim/copula.hpp"
#include "copulasim/distortion.hpp"
#include "copulasim/image_io.hpp"
#include "copulasim/threading.hpp"
#include "copulasim/version.hpp"

namespace fs = std::filesystem;

namespace csim {

const std::vector<Metric>& all_metrics() {
    static const std::vector<Metric> m = {Metric::CSIM, Metric::SSIM,
                                          Metric::FSIM, Metric::ISSM};
    return m;
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::CSIM: return "CSIM";
        case Metric::SSIM: return "SSIM";
        case Metric::FSIM: return "FSIM";
        case Metric::ISSM: return "ISSM";
    }
    return "?";
}

std::vector<Metric> parse_metrics(const std::string& spec) {
    std::string lower;
    for (char ch : spec) lower.push_back(static_cast<char>(std::tolower(ch)));
    if (lower == "all" || lower.empty()) return all_metrics();

    std::vector<Metric> out;
    std::stringstream ss(lower);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "csim") out.push_back(Metric::CSIM);
        else if (tok == "ssim") out.push_back(Metric::SSIM);
        else if (tok == "fsim") out.push_back(Metric::FSIM);
        else if (tok == "issm") out.push_back(Metric::ISSM);
        else throw Error("unknown metric: " + tok);
    }
    if (out.empty()) throw Error("no metrics selected");
    // Canonical order, duplicates removed.
    std::vector<Metric> ordered;
    for (Metric m : all_metrics())
        if (std::find(out.begin(), out.end(), m) != out.end())
            ordered.push_back(m);
    return ordered;
}

double evaluate_metric(Metric m, const Image& a, const Image& b,
                       const MetricConfigs& cfg) {
    switch (m) {
        case Metric::CSIM: return csim_score(a, b, cfg.patch_size);
        case Metric::SSIM: return ssim(a, b, cfg.ssim);
        case Metric::FSIM: return fsim(a, b, cfg.fsim);
        case Metric::ISSM: return issm(a, b, cfg.issm, cfg.ssim);
    }
    throw Error("unknown metric");
}

namespace {

MetricRecord timed_record(const std::string& image_id,
                          const std::string& distortion, double level,
                          Metric m, const Image& a, const Image& b,
                          const MetricConfigs& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const double score = evaluate_metric(m, a, b, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    return {image_id, distortion, level, metric_name(m), score,
            std::chrono::duration<double>(t1 - t0).count()};
}

void sort_records(std::vector<MetricRecord>& records) {
    std::sort(records.begin(), records.end(),
              [](const MetricRecord& x, const MetricRecord& y) {
                  return std::tie(x.image_id, x.distortion, x.level, x.metric) <
                         std::tie(y.image_id, y.distortion, y.level, y.metric);
              });
}

} // namespace

std::vector<MetricRecord> sweep_eval(const Image& img,
                                     const std::vector<double>& blur_sigmas,
                                     const std::vector<double>& noise_sigmas,
                                     double noise_mean,
                                     const std::vector<Metric>& metrics,
                                     std::uint64_t seed,
                                     const MetricConfigs& cfg, int threads) {
    if (blur_sigmas.empty() || noise_sigmas.empty())
        throw EmptyInput("sweep sigma lists must be non-empty");

    struct Task {
        std::string distortion;
        double level;
        Image distorted;
    };
    std::vector<Task> tasks;
    for (double bs : blur_sigmas)
        tasks.push_back({"blur", bs, gaussian_blur(img, bs)});
    for (double ns : noise_sigmas)
        tasks.push_back({"awgn", ns, add_gaussian_noise(img, noise_mean, ns, seed)});
    // 2-D grid: noise first, then blur.
    for (double ns : noise_sigmas) {
        const Image noisy = add_gaussian_noise(img, noise_mean, ns, seed);
        char label[64];
        std::snprintf(label, sizeof(label), "grid:noise=%g", ns);
        for (double bs : blur_sigmas)
            tasks.push_back({label, bs, gaussian_blur(noisy, bs)});
    }

    std::vector<MetricRecord> records(tasks.size() * metrics.size());
    parallel_for(static_cast<int>(tasks.size()), threads, [&](int t) {
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
            records[t * metrics.size() + mi] =
                timed_record("sweep", tasks[t].distortion, tasks[t].level,
                             metrics[mi], img, tasks[t].distorted, cfg);
        }
    });
    sort_records(records);
    return records;
}

VideoSeries video_eval(const std::vector<Image>& frames,
                       const std::vector<Metric>& metrics,
                       std::optional<std::pair<int, int>> resize_to,
                       const MetricConfigs& cfg, int threads) {
    if (frames.size() < 2)
        throw EmptySequence("video evaluation needs at least 2 frames");

    std::vector<Image> prepared(frames.size());
    parallel_for(static_cast<int>(frames.size()), threads, [&](int i) {
        prepared[i] = resize_to ? resize_bilinear(frames[i], resize_to->first,
                                                  resize_to->second)
                                : frames[i];
    });
    for (const Image& f : prepared) validate_pair(prepared.front(), f);

    VideoSeries series;
    series.metrics = metrics;
    series.frame_index.resize(prepared.size());
    for (std::size_t i = 0; i < prepared.size(); ++i)
        series.frame_index[i] = static_cast<int>(i);
    series.scores.assign(metrics.size(),
                         std::vector<double>(prepared.size(), 0.0));

    const Image& reference = prepared.front();
    parallel_for(static_cast<int>(prepared.size()), threads, [&](int f) {
        for (std::size_t mi = 0; mi < metrics.size(); ++mi)
            series.scores[mi][f] =
                evaluate_metric(metrics[mi], reference, prepared[f], cfg);
    });
    return series;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool is_image_file(const fs::path& p) {
    const std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

std::vector<std::string> split_tokens(const std::string& stem) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : stem) {
        if (c == '.' || c == '_') {
            if (!cur.empty()) tokens.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

} // namespace

std::vector<MetricRecord> dataset_eval(const std::string& root,
                                       const std::vector<Metric>& metrics,
                                       const MetricConfigs& cfg, int threads,
                                       std::vector<std::string>* warnings) {
    static const std::vector<std::string> kDistortions = {
        "awgn", "blur", "contrast", "fnoise", "jpeg", "jpeg2000"};

    const fs::path base(root);
    if (!fs::is_directory(base))
        throw LayoutNotRecognized("not a directory: " + root);

    // Originals indexed by their leading filename token.
    std::map<std::string, fs::path> originals;
    const fs::path src = base / "src_imgs";
    if (fs::is_directory(src)) {
        for (const auto& e : fs::directory_iterator(src)) {
            if (!e.is_regular_file() || !is_image_file(e.path())) continue;
            const auto tokens = split_tokens(e.path().stem().string());
            if (!tokens.empty()) originals[lower(tokens.front())] = e.path();
        }
    }
    if (originals.empty())
        throw LayoutNotRecognized("no originals under " + src.string());

    // Distortion folders live at the root or under dst_imgs/.
    struct Pair {
        fs::path original;
        fs::path distorted;
        std::string image_id;
        std::string distortion;
        double level;
    };
    std::vector<Pair> pairs;
    auto scan_dir = [&](const fs::path& dir, const std::string& distortion) {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (!e.is_regular_file() || !is_image_file(e.path())) continue;
            const auto tokens = split_tokens(e.path().stem().string());
            if (tokens.empty()) continue;
            const std::string id = lower(tokens.front());
            const auto orig = originals.find(id);
            double level = 0.0;
            bool has_level = false;
            // Level is the trailing numeric token.
            for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
                try {
                    std::size_t pos = 0;
                    level = std::stod(*it, &pos);
                    if (pos == it->size()) { has_level = true; break; }
                } catch (...) {
                }
                break;
            }
            if (orig == originals.end() || !has_level) {
                if (warnings)
                    warnings->push_back("skipped unrecognized file: " +
                                        e.path().string());
                continue;
            }
            pairs.push_back({orig->second, e.path(), id, distortion, level});
        }
    };
    for (const fs::path& parent : {base, base / "dst_imgs"}) {
        if (!fs::is_directory(parent)) continue;
        for (const auto& e : fs::directory_iterator(parent)) {
            if (!e.is_directory()) continue;
            std::string name = lower(e.path().filename().string());
            name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
            if (std::find(kDistortions.begin(), kDistortions.end(), name) !=
                kDistortions.end())
                scan_dir(e.path(), name);
        }
    }
    if (pairs.empty())
        throw LayoutNotRecognized("no (original, distorted) pairs under " + root);

    std::vector<MetricRecord> records(pairs.size() * metrics.size());
    parallel_for(static_cast<int>(pairs.size()), threads, [&](int p) {
        const Image a = load_image(pairs[p].original.string());
        const Image b = load_image(pairs[p].distorted.string());
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
            records[p * metrics.size() + mi] =
                timed_record(pairs[p].image_id, pairs[p].distortion,
                             pairs[p].level, metrics[mi], a, b, cfg);
        }
    });
    sort_records(records);
    return records;
}

std::vector<AggregateCell> aggregate_by_distortion(
    const std::vector<MetricRecord>& records) {
    if (records.empty()) throw EmptyRecords("no records to aggregate");
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& r : records) {
        auto& cell = acc[{r.metric, r.distortion}];
        cell.first += r.score;
        cell.second += 1;
    }
    std::vector<AggregateCell> out;
    out.reserve(acc.size());
    for (const auto& [key, val] : acc)
        out.push_back({key.first, key.second, val.first / val.second, val.second});
    return out;
}

CorrelationMatrix correlation_matrix(const std::vector<MetricRecord>& records) {
    // Observations aligned on (image_id, distortion, level).
    std::vector<std::string> names;
    for (Metric m : all_metrics()) {
        const std::string n = metric_name(m);
        if (std::any_of(records.begin(), records.end(),
                        [&](const MetricRecord& r) { return r.metric == n; }))
            names.push_back(n);
    }
    using Key = std::tuple<std::string, std::string, double>;
    std::map<Key, std::map<std::string, double>> by_key;
    for (const auto& r : records)
        by_key[{r.image_id, r.distortion, r.level}][r.metric] = r.score;

    const int k = static_cast<int>(names.size());
    CorrelationMatrix cm;
    cm.metrics = names;
    cm.coefficients.assign(static_cast<std::size_t>(k) * k, 1.0);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            std::vector<double> xs, ys;
            for (const auto& [key, scores] : by_key) {
                const auto xi = scores.find(names[i]);
                const auto yj = scores.find(names[j]);
                if (xi != scores.end() && yj != scores.end()) {
                    xs.push_back(xi->second);
                    ys.push_back(yj->second);
                }
            }
            if (xs.size() < 2)
                throw InsufficientData("need >= 2 aligned observations for " +
                                       names[i] + "/" + names[j]);
            const double n = static_cast<double>(xs.size());
            double mx = 0.0, my = 0.0;
            for (std::size_t t = 0; t < xs.size(); ++t) {
                mx += xs[t];
                my += ys[t];
            }
            mx /= n;
            my /= n;
            double vx = 0.0, vy = 0.0, cov = 0.0;
            for (std::size_t t = 0; t < xs.size(); ++t) {
                vx += (xs[t] - mx) * (xs[t] - mx);
                vy += (ys[t] - my) * (ys[t] - my);
                cov += (xs[t] - mx) * (ys[t] - my);
            }
            const double denom = std::sqrt(vx * vy);
            const double rho = denom > 0.0 ? cov / denom : 0.0;
            cm.coefficients[static_cast<std::size_t>(i) * k + j] = rho;
            cm.coefficients[static_cast<std::size_t>(j) * k + i] = rho;
        }
    }
    return cm;
}

void write_records_csv(const std::string& path,
                       const std::vector<MetricRecord>& records,
                       const CsvMeta& meta) {
    std::vector<MetricRecord> sorted = records;
    sort_records(sorted);
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    for (const auto& [k, v] : meta) out << "# " << k << ": " << v << "\n";
    out << "image_id,distortion,level,metric,score,wall_time_s\n";
    char line[256];
    for (const auto& r : sorted) {
        std::snprintf(line, sizeof(line), "%s,%s,%g,%s,%.6f,%.6f\n",
                      r.image_id.c_str(), r.distortion.c_str(), r.level,
                      r.metric.c_str(), r.score, r.wall_time_s);
        out << line;
    }
}

void write_records_json(const std::string& path,
                        const std::vector<MetricRecord>& records,
                        const CsvMeta& meta) {
    std::vector<MetricRecord> sorted = records;
    sort_records(sorted);
    nlohmann::json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    j["records"] = nlohmann::json::array();
    for (const auto& r : sorted) {
        j["records"].push_back({{"image_id", r.image_id},
                                {"distortion", r.distortion},
                                {"level", r.level},
                                {"metric", r.metric},
                                {"score", r.score},
                                {"wall_time_s", r.wall_time_s}});
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

std::uint64_t config_hash(const MetricConfigs& cfg, std::uint64_t seed) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "v=%s p=%d seed=%llu ssim=%g,%g,%d,%d,%g fsim=%g,%g,%g,%d,%d,%g,%g,%g,%g "
                  "issm=%g,%g,%g,%g,%d",
                  kVersion, cfg.patch_size,
                  static_cast<unsigned long long>(seed), cfg.ssim.c1,
                  cfg.ssim.c2, cfg.ssim.global_window ? 1 : 0,
                  cfg.ssim.window_size, cfg.ssim.window_sigma, cfg.fsim.t1,
                  cfg.fsim.t2, cfg.fsim.epsilon, cfg.fsim.scales,
                  cfg.fsim.orientations, cfg.fsim.min_wavelength, cfg.fsim.mult,
                  cfg.fsim.sigma_on_f, cfg.fsim.d_theta_on_sigma, cfg.issm.a,
                  cfg.issm.b, cfg.issm.c, cfg.issm.e, cfg.issm.bins);
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (const char* p = buf; *p; ++p) {
        h ^= static_cast<std::uint8_t>(*p);
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace csim
