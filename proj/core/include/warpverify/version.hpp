#pragma once

namespace warpverify {

inline constexpr const char* kVersion = "0.1.0";
// Bumped whenever a default tolerance, control, or report field changes.
inline constexpr const char* kDefaultsVersion = "1";

}  // namespace warpverify
