#pragma once

namespace tiltsense {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tiltsense
