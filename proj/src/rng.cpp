// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/rng.hpp"

namespace jetconvex {

namespace {
constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29,
                                31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
}

std::vector<std::vector<double>> haltonBoxPoints(std::size_t count,
                                                 const std::vector<double>& lo,
                                                 const std::vector<double>& hi,
                                                 std::uint64_t seed)
{
    const std::size_t d = lo.size();
    Rng rot(seed, 0x48616c746f6eULL);
    std::vector<double> shift(d);
    for (auto& s : shift)
        s = rot.uniform();

    std::vector<std::vector<double>> pts(count, std::vector<double>(d));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const unsigned base = kPrimes[k % (sizeof(kPrimes) / sizeof(kPrimes[0]))];
            double u = radicalInverse(i, base) + shift[k];
            if (u >= 1.0) u -= 1.0;
            pts[i][k] = lo[k] + (hi[k] - lo[k]) * u;
        }
    }
    return pts;
}

} // namespace jetconvex
