#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "copulasim/image.hpp"

namespace csim {

/// Non-overlapping P x P tiling in raster order over patch coordinates.
/// Trailing rows/columns that do not fill a full patch are discarded.
/// Patches are stored channel-planar: for patch p and channel c the P*P
/// pixels lie contiguously at offset (p * channels + c) * P*P, in
/// pixel-raster order within the patch.
struct PatchGrid {
    int patch_size = 0;
    int grid_rows = 0;
    int grid_cols = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    int patch_count() const { return grid_rows * grid_cols; }
    int pixels_per_patch() const { return patch_size * patch_size; }

    std::span<const std::uint8_t> channel(int patch, int c) const {
        const std::size_t n = static_cast<std::size_t>(pixels_per_patch());
        return {data.data() + (static_cast<std::size_t>(patch) * channels + c) * n, n};
    }

    /// Whole patch block (all channels, channel-major).
    std::span<const std::uint8_t> patch(int p) const {
        const std::size_t n =
            static_cast<std::size_t>(pixels_per_patch()) * channels;
        return {data.data() + static_cast<std::size_t>(p) * n, n};
    }
};

/// Throws InvalidPatchSize (patch_size < 1) or PatchTooLarge.
PatchGrid extract_patches(const Image& img, int patch_size);

} // namespace csim
