#pragma once

namespace csim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace csim
