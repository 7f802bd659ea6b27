// SPDX-License-Identifier: Apache-2.0
//
// The minimal extension m (pointwise max of the data's tangent planes) and
// the per-point tangent gap. Both depend only on the dataset, so that every
// layer above, including the moduli oracles, can reach them.

#pragma once

#include "jetconvex/jet.hpp"

#include <span>
#include <vector>

namespace jetconvex {

struct MinimalValue {
    double value = 0.0;
    /// All indices whose tangent plane is within 1e-12 * dataScale of the max.
    std::vector<std::size_t> argmax;
};

/// m(x) = max_j (f_j + <g_j, x - x_j>): the smallest convex function
/// compatible with the jet. For validated data it interpolates, m(x_i) = f_i.
MinimalValue minimalExtension(const JetDataset& ds, std::span<const double> x);

/// Fills vals[j] = f_j + <g_j, x - x_j> for every j and returns the max.
/// vals must have length ds.size().
double tangentPlanes(const JetDataset& ds, std::span<const double> x, double* vals);

/// Gap between the minimal extension and the tangent plane at point i:
/// psi_i(x) = m(x) - f_i - <g_i, x - x_i>. Nonnegative, zero at x_i, and at
/// most 2 * gradSupNorm * |x - x_i|. Throws std::out_of_range on a bad index.
double tangentGap(const JetDataset& ds, std::size_t i, std::span<const double> x);

} // namespace jetconvex
