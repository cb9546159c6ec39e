#pragma once

namespace trotter {
inline constexpr const char* VERSION = "0.1.0";
}
