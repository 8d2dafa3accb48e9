#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "copulasim/image.hpp"
#include "copulasim/patches.hpp"

namespace csim {

/// Per-pixel ranks of one channel of one patch, in pixel-raster order.
/// Always a strict permutation of 1..N: ties broken by lower pixel index.
using RankVector = std::vector<int>;

/// Rank of element i = 1 + #{j : (value_j, j) < (value_i, i)} lexicographic.
/// Counting sort over the 256 intensity levels, stable in pixel index.
/// Throws EmptyInput.
RankVector compute_ranks(std::span<const std::uint8_t> channel_values);

/// Ranks -> (0,1]: element i = R_i / N.
std::vector<double> normalize_ranks(const RankVector& ranks);

/// The N distinct normal scores for patches of N pixels:
/// table[r-1] = PPF(clamp(r/N, 1/(2N), 1 - 1/(2N))) for r = 1..N.
std::vector<double> normal_score_table(int n_pixels);

/// Gaussian-quantile-transformed ranks of one patch, channel-major then
/// pixel-raster. Length = channels * P^2.
struct CopulaVector {
    int patch_size = 0;
    int channels = 0;
    std::vector<double> values;
};

/// Copula vectors of every patch, patch-grid raster order.
struct ImageCopula {
    int patch_size = 0;
    int channels = 0;
    int grid_rows = 0;
    int grid_cols = 0;
    std::vector<CopulaVector> patch_copulas;

    int n_patches() const { return static_cast<int>(patch_copulas.size()); }
    std::size_t total_len() const {
        return patch_copulas.empty()
                   ? 0
                   : patch_copulas.size() * patch_copulas.front().values.size();
    }
};

/// Per-patch similarity scores on the patch grid, row-major, each in [0,1].
struct SimilarityMap {
    int grid_rows = 0;
    int grid_cols = 0;
    std::vector<double> scores;

    double at(int r, int c) const { return scores[static_cast<std::size_t>(r) * grid_cols + c]; }
};

CopulaVector patch_copula(const PatchGrid& grid, int patch_index);

/// Convenience overload for a standalone channel-planar block.
CopulaVector patch_copula(std::span<const std::uint8_t> block, int patch_size,
                          int channels);

ImageCopula image_copula(const Image& img, int patch_size);

/// Euclidean distance over the full concatenated vectors.
/// Throws LengthMismatch.
double copula_distance(const ImageCopula& c1, const ImageCopula& c2);

/// S = max(0, 1 - d / sqrt(L)) with L the concatenated vector length.
double csim_score(const Image& a, const Image& b, int patch_size = 8);

/// Per-patch s = max(0, 1 - d_patch / sqrt(C * P^2)), on the patch grid.
SimilarityMap csim_map(const Image& a, const Image& b, int patch_size = 8);

} // namespace csim
