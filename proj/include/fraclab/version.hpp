#pragma once

namespace fraclab::version {

inline constexpr const char* kString = "0.1.0";

}  // namespace fraclab::version
