#pragma once

#include <string_view>

namespace fraburgers {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace fraburgers
