#pragma once

namespace cdd {

inline constexpr const char* version_string = "1.0.0";

}  // namespace cdd
