#pragma once

namespace flk {

inline constexpr const char* kToolName = "flasquekit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace flk
