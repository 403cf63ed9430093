#pragma once

#include <string_view>

namespace waveheat {
inline constexpr std::string_view kVersion = "0.1.0";
}
