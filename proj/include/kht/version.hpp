#pragma once

namespace kht {
inline constexpr const char* engine_version = "kht 0.1.0";
}
