#pragma once

namespace scdec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scdec
