#pragma once

namespace wafermc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wafermc
