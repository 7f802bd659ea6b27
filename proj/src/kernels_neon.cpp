// SPDX-License-Identifier: Apache-2.0
//
// NEON kernels for AArch64. 2 doubles per vector, scalar tails, no fused
// multiply-add so results match the scalar reference bit for bit.

#include "jetconvex/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

#include <algorithm>
#include <cmath>

namespace jetconvex {
namespace kernels {

namespace {

void axpyNeon(double* out, const double* x, double a, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vo = vld1q_f64(out + i);
        float64x2_t vx = vld1q_f64(x + i);
        vo = vaddq_f64(vo, vmulq_n_f64(vx, a));
        vst1q_f64(out + i, vo);
    }
    for (; i < n; ++i)
        out[i] += a * x[i];
}

void sqDiffAccNeon(double* acc, const double* x, double c, std::size_t n)
{
    const float64x2_t vc = vdupq_n_f64(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t vd = vsubq_f64(vld1q_f64(x + i), vc);
        float64x2_t va = vld1q_f64(acc + i);
        va = vaddq_f64(va, vmulq_f64(vd, vd));
        vst1q_f64(acc + i, va);
    }
    for (; i < n; ++i) {
        const double d = x[i] - c;
        acc[i] += d * d;
    }
}

void sqrtInPlaceNeon(double* x, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(x + i, vsqrtq_f64(vld1q_f64(x + i)));
    for (; i < n; ++i)
        x[i] = std::sqrt(x[i]);
}

void slackRowNeon(double* out, const double* f, const double* gy,
                  const double* gyOwn, double fi, std::size_t n)
{
    const float64x2_t vfi = vdupq_n_f64(fi);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        float64x2_t v = vsubq_f64(vfi, vld1q_f64(f + j));
        v = vsubq_f64(v, vld1q_f64(gy + j));
        v = vaddq_f64(v, vld1q_f64(gyOwn + j));
        vst1q_f64(out + j, v);
    }
    for (; j < n; ++j)
        out[j] = fi - f[j] - gy[j] + gyOwn[j];
}

double reduceMaxNeon(const double* x, std::size_t n)
{
    if (n < 2) return x[0];
    float64x2_t vm = vld1q_f64(x);
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2)
        vm = vmaxq_f64(vm, vld1q_f64(x + i));
    double m = vmaxvq_f64(vm);
    for (; i < n; ++i)
        m = std::max(m, x[i]);
    return m;
}

double reduceMinNeon(const double* x, std::size_t n)
{
    if (n < 2) return x[0];
    float64x2_t vm = vld1q_f64(x);
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2)
        vm = vminq_f64(vm, vld1q_f64(x + i));
    double m = vminvq_f64(vm);
    for (; i < n; ++i)
        m = std::min(m, x[i]);
    return m;
}

double reluSubScaledMaxNeon(const double* b, const double* q, double alpha,
                            std::size_t n)
{
    float64x2_t vm = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vsubq_f64(vld1q_f64(b + i),
                                  vmulq_n_f64(vld1q_f64(q + i), alpha));
        vm = vmaxq_f64(vm, v);
    }
    double m = vmaxvq_f64(vm);
    for (; i < n; ++i)
        m = std::max(m, b[i] - alpha * q[i]);
    return m;
}

} // namespace

const Ops* neonOpsTable()
{
    static const Ops ops = {
        "neon",
        axpyNeon,
        sqDiffAccNeon,
        sqrtInPlaceNeon,
        slackRowNeon,
        reduceMaxNeon,
        reduceMinNeon,
        reluSubScaledMaxNeon,
    };
    return &ops;
}

} // namespace kernels
} // namespace jetconvex

#endif // __aarch64__
