#pragma once

namespace bai {
inline constexpr const char* kVersion = "0.1.0";
}
