#pragma once

namespace gbn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gbn
