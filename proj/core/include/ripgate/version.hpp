#pragma once

namespace ripgate {
inline constexpr const char* kVersion = "0.1.0";
}
