#pragma once

namespace mipt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mipt
