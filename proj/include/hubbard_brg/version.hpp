#pragma once

namespace hbrg {
inline constexpr const char* kVersion = "0.1.0";
}
