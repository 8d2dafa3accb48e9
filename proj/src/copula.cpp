#include "copulasim/copula.hpp"

#include <cmath>

#include "copulasim/normal.hpp"

namespace csim {

namespace {

// Counting sort over the 256 intensity levels; iterating pixels in raster
// order makes ties resolve to the lower index.
void rank_channel(const std::uint8_t* values, int n, int* out) {
    int start[257] = {0};
    for (int i = 0; i < n; ++i) ++start[values[i] + 1];
    for (int v = 1; v <= 256; ++v) start[v] += start[v - 1];
    for (int i = 0; i < n; ++i) out[i] = ++start[values[i]];
}

} // namespace

RankVector compute_ranks(std::span<const std::uint8_t> channel_values) {
    if (channel_values.empty()) throw EmptyInput("cannot rank an empty patch");
    RankVector ranks(channel_values.size());
    rank_channel(channel_values.data(),
                 static_cast<int>(channel_values.size()), ranks.data());
    return ranks;
}

std::vector<double> normalize_ranks(const RankVector& ranks) {
    const double n = static_cast<double>(ranks.size());
    std::vector<double> out(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) out[i] = ranks[i] / n;
    return out;
}

std::vector<double> normal_score_table(int n_pixels) {
    const double n = n_pixels;
    const double lo = 1.0 / (2.0 * n);
    const double hi = 1.0 - lo;
    std::vector<double> table(n_pixels);
    for (int r = 1; r <= n_pixels; ++r) {
        double u = r / n;
        if (u < lo) u = lo;
        if (u > hi) u = hi;
        table[r - 1] = standard_normal_ppf(u);
    }
    return table;
}

namespace {

CopulaVector patch_copula_with_table(std::span<const std::uint8_t> block,
                                     int patch_size, int channels,
                                     const std::vector<double>& table) {
    const int n = patch_size * patch_size;
    CopulaVector cv;
    cv.patch_size = patch_size;
    cv.channels = channels;
    cv.values.resize(static_cast<std::size_t>(channels) * n);
    for (int c = 0; c < channels; ++c) {
        const RankVector ranks =
            compute_ranks(block.subspan(static_cast<std::size_t>(c) * n, n));
        double* out = cv.values.data() + static_cast<std::size_t>(c) * n;
        for (int i = 0; i < n; ++i) out[i] = table[ranks[i] - 1];
    }
    return cv;
}

} // namespace

CopulaVector patch_copula(std::span<const std::uint8_t> block, int patch_size,
                          int channels) {
    return patch_copula_with_table(block, patch_size, channels,
                                   normal_score_table(patch_size * patch_size));
}

CopulaVector patch_copula(const PatchGrid& grid, int patch_index) {
    return patch_copula(grid.patch(patch_index), grid.patch_size,
                        grid.channels);
}

ImageCopula image_copula(const Image& img, int patch_size) {
    const PatchGrid grid = extract_patches(img, patch_size);

    ImageCopula ic;
    ic.patch_size = patch_size;
    ic.channels = grid.channels;
    ic.grid_rows = grid.grid_rows;
    ic.grid_cols = grid.grid_cols;
    ic.patch_copulas.reserve(grid.patch_count());

    // The per-channel value multiset is fixed by N; only ranks vary, so the
    // quantile transform reduces to a table lookup.
    const std::vector<double> table =
        normal_score_table(patch_size * patch_size);
    for (int p = 0; p < grid.patch_count(); ++p) {
        ic.patch_copulas.push_back(patch_copula_with_table(
            grid.patch(p), patch_size, grid.channels, table));
    }
    return ic;
}

double copula_distance(const ImageCopula& c1, const ImageCopula& c2) {
    if (c1.total_len() != c2.total_len())
        throw LengthMismatch("copula vector lengths differ: " +
                             std::to_string(c1.total_len()) + " vs " +
                             std::to_string(c2.total_len()));
    double sum = 0.0;
    for (std::size_t p = 0; p < c1.patch_copulas.size(); ++p) {
        const auto& a = c1.patch_copulas[p].values;
        const auto& b = c2.patch_copulas[p].values;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            sum += d * d;
        }
    }
    return std::sqrt(sum);
}

namespace {

const std::uint8_t* patch_row(const Image& img, int px, int py, int patch_size,
                              int dy, int c) {
    return img.data.data() +
           (static_cast<std::size_t>(py * patch_size + dy) * img.width +
            static_cast<std::size_t>(px) * patch_size) *
               img.channels +
           c;
}

} // namespace

double csim_score(const Image& a, const Image& b, int patch_size) {
    validate_pair(a, b);
    if (patch_size < 1)
        throw InvalidPatchSize("patch size must be >= 1, got " +
                               std::to_string(patch_size));
    if (patch_size > a.width || patch_size > a.height)
        throw PatchTooLarge("patch size " + std::to_string(patch_size) +
                            " exceeds image " + shape_string(a));

    // Streamed variant of copula_distance(image_copula(a), image_copula(b)):
    // identical arithmetic and summation order, but patches are ranked in
    // place without materializing the grids or per-patch vectors.
    const int grid_rows = a.height / patch_size;
    const int grid_cols = a.width / patch_size;
    const int n = patch_size * patch_size;
    const std::vector<double> table = normal_score_table(n);

    const int stride = a.channels;
    double sum = 0.0;
    for (int pr = 0; pr < grid_rows; ++pr) {
        for (int pc = 0; pc < grid_cols; ++pc) {
            for (int c = 0; c < a.channels; ++c) {
                int start_a[257] = {0}, start_b[257] = {0};
                for (int dy = 0; dy < patch_size; ++dy) {
                    const std::uint8_t* ra = patch_row(a, pc, pr, patch_size, dy, c);
                    const std::uint8_t* rb = patch_row(b, pc, pr, patch_size, dy, c);
                    for (int dx = 0; dx < patch_size; ++dx) {
                        ++start_a[ra[dx * stride] + 1];
                        ++start_b[rb[dx * stride] + 1];
                    }
                }
                for (int v = 1; v <= 256; ++v) {
                    start_a[v] += start_a[v - 1];
                    start_b[v] += start_b[v - 1];
                }
                // Fused ranking + quantile lookup: pixels of intensity v take
                // consecutive ranks, so their z-scores are consecutive table
                // entries starting at the counting-sort prefix.
                for (int dy = 0; dy < patch_size; ++dy) {
                    const std::uint8_t* ra = patch_row(a, pc, pr, patch_size, dy, c);
                    const std::uint8_t* rb = patch_row(b, pc, pr, patch_size, dy, c);
                    for (int dx = 0; dx < patch_size; ++dx) {
                        const double d = table[start_a[ra[dx * stride]]++] -
                                         table[start_b[rb[dx * stride]]++];
                        sum += d * d;
                    }
                }
            }
        }
    }
    const double l = static_cast<double>(grid_rows) * grid_cols * a.channels * n;
    const double s = 1.0 - std::sqrt(sum) / std::sqrt(l);
    return s > 0.0 ? s : 0.0;
}

SimilarityMap csim_map(const Image& a, const Image& b, int patch_size) {
    validate_pair(a, b);
    const ImageCopula ca = image_copula(a, patch_size);
    const ImageCopula cb = image_copula(b, patch_size);

    SimilarityMap map;
    map.grid_rows = ca.grid_rows;
    map.grid_cols = ca.grid_cols;
    map.scores.resize(ca.patch_copulas.size());
    const double norm = std::sqrt(
        static_cast<double>(ca.channels) * patch_size * patch_size);
    for (std::size_t p = 0; p < ca.patch_copulas.size(); ++p) {
        const auto& va = ca.patch_copulas[p].values;
        const auto& vb = cb.patch_copulas[p].values;
        double sum = 0.0;
        for (std::size_t i = 0; i < va.size(); ++i) {
            const double d = va[i] - vb[i];
            sum += d * d;
        }
        const double s = 1.0 - std::sqrt(sum) / norm;
        map.scores[p] = s > 0.0 ? s : 0.0;
    }
    return map;
}

} // namespace csim
