#pragma once

namespace matchlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace matchlab
