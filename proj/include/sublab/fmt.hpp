#pragma once

#include <cstdio>
#include <string>

namespace sublab::fmt {

/// Shortest-round-trip-safe decimal form used in all CSV output.
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace sublab::fmt
