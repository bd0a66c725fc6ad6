#pragma once

namespace greendyn {
inline constexpr const char* kVersion = "0.1.0";
}
