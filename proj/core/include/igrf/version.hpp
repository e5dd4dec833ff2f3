#pragma once

namespace igrf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace igrf
