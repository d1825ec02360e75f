#pragma once

namespace affinv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace affinv
