// SPDX-License-Identifier: Apache-2.0
//
// AVX2 kernels. 4 doubles per vector, unaligned loads, scalar tails.
// No FMA: each element goes through the same mul/sub/add rounding sequence
// as the scalar reference, so results are bit-identical (the tests rely on
// this). Compiled with -mavx2 -ffp-contract=off; only reached through the
// dispatch table after a CPU check.

#include "jetconvex/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define JETCONVEX_HAVE_AVX2_TU 1
#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace jetconvex {
namespace kernels {

namespace {

void axpyAvx2(double* out, const double* x, double a, std::size_t n)
{
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vo = _mm256_loadu_pd(out + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        vo = _mm256_add_pd(vo, _mm256_mul_pd(va, vx));
        _mm256_storeu_pd(out + i, vo);
    }
    for (; i < n; ++i)
        out[i] += a * x[i];
}

void sqDiffAccAvx2(double* acc, const double* x, double c, std::size_t n)
{
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vd = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
        __m256d va = _mm256_loadu_pd(acc + i);
        va = _mm256_add_pd(va, _mm256_mul_pd(vd, vd));
        _mm256_storeu_pd(acc + i, va);
    }
    for (; i < n; ++i) {
        const double d = x[i] - c;
        acc[i] += d * d;
    }
}

void sqrtInPlaceAvx2(double* x, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_sqrt_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i)
        x[i] = std::sqrt(x[i]);
}

void slackRowAvx2(double* out, const double* f, const double* gy,
                  const double* gyOwn, double fi, std::size_t n)
{
    const __m256d vfi = _mm256_set1_pd(fi);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d v = _mm256_sub_pd(vfi, _mm256_loadu_pd(f + j));
        v = _mm256_sub_pd(v, _mm256_loadu_pd(gy + j));
        v = _mm256_add_pd(v, _mm256_loadu_pd(gyOwn + j));
        _mm256_storeu_pd(out + j, v);
    }
    for (; j < n; ++j)
        out[j] = fi - f[j] - gy[j] + gyOwn[j];
}

double horizontalMax(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

double horizontalMin(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

double reduceMaxAvx2(const double* x, std::size_t n)
{
    if (n < 4) {
        double m = x[0];
        for (std::size_t i = 1; i < n; ++i)
            m = std::max(m, x[i]);
        return m;
    }
    __m256d vm = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4)
        vm = _mm256_max_pd(vm, _mm256_loadu_pd(x + i));
    double m = horizontalMax(vm);
    for (; i < n; ++i)
        m = std::max(m, x[i]);
    return m;
}

double reduceMinAvx2(const double* x, std::size_t n)
{
    if (n < 4) {
        double m = x[0];
        for (std::size_t i = 1; i < n; ++i)
            m = std::min(m, x[i]);
        return m;
    }
    __m256d vm = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4)
        vm = _mm256_min_pd(vm, _mm256_loadu_pd(x + i));
    double m = horizontalMin(vm);
    for (; i < n; ++i)
        m = std::min(m, x[i]);
    return m;
}

double reluSubScaledMaxAvx2(const double* b, const double* q, double alpha,
                            std::size_t n)
{
    const __m256d va = _mm256_set1_pd(alpha);
    __m256d vm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_sub_pd(_mm256_loadu_pd(b + i),
                                  _mm256_mul_pd(va, _mm256_loadu_pd(q + i)));
        vm = _mm256_max_pd(vm, v);
    }
    double m = horizontalMax(vm); // lanes start at 0, so m >= 0
    for (; i < n; ++i)
        m = std::max(m, b[i] - alpha * q[i]);
    return m;
}

} // namespace

const Ops* avx2OpsTable()
{
    static const Ops ops = {
        "avx2",
        axpyAvx2,
        sqDiffAccAvx2,
        sqrtInPlaceAvx2,
        slackRowAvx2,
        reduceMaxAvx2,
        reduceMinAvx2,
        reluSubScaledMaxAvx2,
    };
    return &ops;
}

} // namespace kernels
} // namespace jetconvex

#endif // x86_64
