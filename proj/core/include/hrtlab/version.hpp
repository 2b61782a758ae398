#pragma once

namespace hrtlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hrtlab
