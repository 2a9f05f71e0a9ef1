#pragma once

namespace daogini {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace daogini
