#pragma once

#include <string>

#include "copulasim/image.hpp"

namespace csim {

/// Decodes PNG/JPEG/BMP. 16-bit sources are rescaled to 8-bit, alpha dropped.
/// Throws FileNotFound, UnsupportedFormat, CorruptData.
Image load_image(const std::string& path);

/// Encodes by extension (.png/.jpg/.bmp).
void save_image(const Image& img, const std::string& path);

} // namespace csim
