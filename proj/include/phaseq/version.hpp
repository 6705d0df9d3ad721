#pragma once

namespace phaseq {

inline constexpr const char* toolkit_name = "phaseq";
inline constexpr const char* toolkit_version = "1.0.0";

}  // namespace phaseq
