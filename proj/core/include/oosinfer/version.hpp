#pragma once

namespace oosinfer {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace oosinfer
