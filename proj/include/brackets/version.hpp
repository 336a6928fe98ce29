#pragma once

namespace brackets {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace brackets
