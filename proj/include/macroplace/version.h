#pragma once

namespace macroplace {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace macroplace
