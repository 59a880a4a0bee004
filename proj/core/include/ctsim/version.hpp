#pragma once

namespace ctsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ctsim
