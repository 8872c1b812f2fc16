#pragma once

namespace aplab {
inline constexpr const char* kVersion = "0.1.0";
}
