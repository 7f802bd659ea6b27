// SPDX-License-Identifier: Apache-2.0
//
// Locale-independent float formatting for CSV output: 17 significant
// digits, '.' decimal separator, enough to round-trip binary64 exactly.

#pragma once

#include <charconv>
#include <string>

namespace jetconvex {

inline std::string formatDouble(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

} // namespace jetconvex
