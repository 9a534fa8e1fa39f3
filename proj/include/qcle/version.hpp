#pragma once

namespace qcle {
inline constexpr const char* kVersion = "0.1.0";
}
