// SPDX-License-Identifier: Apache-2.0
//
// Runtime-dispatched arithmetic kernels for the dense inner loops
// (pairwise slacks, batch affine/distance evaluation, modulus reductions).
//
// Every kernel is elementwise or a min/max reduction, so the SIMD backends
// produce bit-identical results to the scalar reference: per-element
// operations perform the same rounding sequence (the kernel translation
// units are compiled with FP contraction off), and min/max reductions are
// exact under any association. The equivalence tests assert bit equality.

#pragma once

#include <cstddef>

namespace jetconvex {
namespace kernels {

enum class Backend { Auto, Scalar, Avx2, Neon };

struct Ops {
    const char* name;

    // out[i] += a * x[i]
    void (*axpy)(double* out, const double* x, double a, std::size_t n);

    // acc[i] += (x[i] - c)^2
    void (*sqDiffAcc)(double* acc, const double* x, double c, std::size_t n);

    // x[i] = sqrt(x[i])
    void (*sqrtInPlace)(double* x, std::size_t n);

    // out[j] = fi - f[j] - gy[j] + gyOwn[j]
    void (*slackRow)(double* out, const double* f, const double* gy,
                     const double* gyOwn, double fi, std::size_t n);

    // max_i x[i], n >= 1
    double (*reduceMax)(const double* x, std::size_t n);

    // min_i x[i], n >= 1
    double (*reduceMin)(const double* x, std::size_t n);

    // max_i max(0, b[i] - alpha * q[i]); 0 for n == 0
    double (*reluSubScaledMax)(const double* b, const double* q, double alpha,
                               std::size_t n);
};

/// Backend currently in use (selected once on first call, see select()).
const Ops& active();

/// Scalar reference backend, always available.
const Ops& scalarOps();

/// AVX2 backend, or nullptr when unsupported by the CPU or the build.
const Ops* avx2Ops();

/// NEON backend, or nullptr when not an AArch64 build.
const Ops* neonOps();

/// Force a backend (tests) or restore auto-detection. Throws
/// std::invalid_argument when the requested backend is unavailable.
void select(Backend backend);

} // namespace kernels
} // namespace jetconvex
