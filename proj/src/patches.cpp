#include "copulasim/patches.hpp"

namespace csim {

PatchGrid extract_patches(const Image& img, int patch_size) {
    if (patch_size < 1)
        throw InvalidPatchSize("patch size must be >= 1, got " +
                               std::to_string(patch_size));
    if (patch_size > img.width || patch_size > img.height)
        throw PatchTooLarge("patch size " + std::to_string(patch_size) +
                            " exceeds image " + shape_string(img));

    PatchGrid grid;
    grid.patch_size = patch_size;
    grid.grid_rows = img.height / patch_size;
    grid.grid_cols = img.width / patch_size;
    grid.channels = img.channels;
    const int pp = patch_size * patch_size;
    grid.data.resize(static_cast<std::size_t>(grid.patch_count()) *
                     img.channels * pp);

    std::size_t out = 0;
    for (int pr = 0; pr < grid.grid_rows; ++pr) {
        for (int pc = 0; pc < grid.grid_cols; ++pc) {
            for (int c = 0; c < img.channels; ++c) {
                for (int dy = 0; dy < patch_size; ++dy) {
                    const int y = pr * patch_size + dy;
                    for (int dx = 0; dx < patch_size; ++dx) {
                        grid.data[out++] = img.at(pc * patch_size + dx, y, c);
                    }
                }
            }
        }
    }
    return grid;
}

} // namespace csim
