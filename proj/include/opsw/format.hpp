#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace opsw {

/// Shortest text that parses back to exactly `v`.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Fixed two-decimal rendering used by the result tables.
inline std::string format_fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace opsw
