#pragma once

namespace sublab {

inline constexpr const char* kToolkitName = "subordinator-lab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace sublab
