// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. This translation unit is compiled with
// -ffp-contract=off so the per-element rounding sequence is fixed and the
// SIMD backends can match it exactly.

#include "jetconvex/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace jetconvex {
namespace kernels {

namespace {

void axpyScalar(double* out, const double* x, double a, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] += a * x[i];
}

void sqDiffAccScalar(double* acc, const double* x, double c, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - c;
        acc[i] += d * d;
    }
}

void sqrtInPlaceScalar(double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::sqrt(x[i]);
}

void slackRowScalar(double* out, const double* f, const double* gy,
                    const double* gyOwn, double fi, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j)
        out[j] = fi - f[j] - gy[j] + gyOwn[j];
}

double reduceMaxScalar(const double* x, std::size_t n)
{
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        m = std::max(m, x[i]);
    return m;
}

double reduceMinScalar(const double* x, std::size_t n)
{
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
        m = std::min(m, x[i]);
    return m;
}

double reluSubScaledMaxScalar(const double* b, const double* q, double alpha,
                              std::size_t n)
{
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        m = std::max(m, b[i] - alpha * q[i]);
    return m;
}

} // namespace

const Ops& scalarOps()
{
    static const Ops ops = {
        "scalar",
        axpyScalar,
        sqDiffAccScalar,
        sqrtInPlaceScalar,
        slackRowScalar,
        reduceMaxScalar,
        reduceMinScalar,
        reluSubScaledMaxScalar,
    };
    return ops;
}

} // namespace kernels
} // namespace jetconvex
