#pragma once

namespace statgate {

inline constexpr const char* kVersion = "statgate 0.1.0";

}  // namespace statgate
