#pragma once

namespace kz {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kz
