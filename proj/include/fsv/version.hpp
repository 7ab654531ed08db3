#pragma once

namespace fsv {

inline constexpr const char* kToolName = "fsv";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace fsv
