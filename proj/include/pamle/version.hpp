#pragma once

namespace pamle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pamle
