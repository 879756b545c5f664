#pragma once

namespace hwl {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace hwl
