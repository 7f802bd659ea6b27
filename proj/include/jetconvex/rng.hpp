// SPDX-License-Identifier: Apache-2.0
//
// Deterministic counter-based random numbers. Every draw is a pure function
// of (seed, counter), so sample streams replay bit-for-bit across runs and
// platforms; nothing here depends on libstdc++ distribution internals.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace jetconvex {

/// splitmix64 finalizer: a fixed 64-bit mix, used as the core generator.
inline std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(mix64(seed ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))),
          counter_(0)
    {
    }

    std::uint64_t nextU64() { return mix64(base_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal()
    {
        const double u1 = (static_cast<double>(nextU64() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(nextU64() % n); }

    /// Uniform point in the axis-aligned box [lo_k, hi_k].
    std::vector<double> boxPoint(const std::vector<double>& lo, const std::vector<double>& hi)
    {
        std::vector<double> p(lo.size());
        for (std::size_t k = 0; k < lo.size(); ++k)
            p[k] = uniform(lo[k], hi[k]);
        return p;
    }

    /// Uniform direction on the unit sphere in R^d.
    std::vector<double> direction(std::size_t d)
    {
        std::vector<double> v(d);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : v) {
                c = normal();
                norm += c * c;
            }
        } while (norm < 1e-12);
        norm = std::sqrt(norm);
        for (auto& c : v)
            c /= norm;
        return v;
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

/// Halton radical inverse in the given prime base (index >= 0).
inline double radicalInverse(std::uint64_t index, unsigned base)
{
    double inv = 1.0 / base, f = inv, r = 0.0;
    for (std::uint64_t i = index + 1; i > 0; i /= base) {
        r += f * static_cast<double>(i % base);
        f *= inv;
    }
    return r;
}

/// Low-discrepancy point set in a box: Halton sequence with a seeded
/// Cranley-Patterson rotation per axis.
std::vector<std::vector<double>> haltonBoxPoints(std::size_t count,
                                                 const std::vector<double>& lo,
                                                 const std::vector<double>& hi,
                                                 std::uint64_t seed);

} // namespace jetconvex
