#pragma once

namespace hka {

inline constexpr const char* version = "1.0.0";

}  // namespace hka
