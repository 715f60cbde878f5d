#pragma once

namespace mcflab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mcflab
