#pragma once

namespace sciforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sciforge
