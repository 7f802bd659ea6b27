// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

// Absolute-tolerance comparison that prints both sides on failure.
#define CHECK_CLOSE(a, b, tol)                                                 \
    do {                                                                       \
        const double lhsv_ = (a);                                              \
        const double rhsv_ = (b);                                              \
        CAPTURE(lhsv_);                                                        \
        CAPTURE(rhsv_);                                                        \
        CHECK(std::abs(lhsv_ - rhsv_) <= (tol));                               \
    } while (0)
