// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/minimal.hpp"

#include "jetconvex/kernels.hpp"

#include <stdexcept>

namespace jetconvex {

double tangentPlanes(const JetDataset& ds, std::span<const double> x, double* vals)
{
    const std::size_t n = ds.size();
    const auto& ops = kernels::active();
    std::copy(ds.tangentOffset(), ds.tangentOffset() + n, vals);
    for (std::size_t k = 0; k < ds.dim(); ++k)
        ops.axpy(vals, ds.gCol(k), x[k], n);
    return ops.reduceMax(vals, n);
}

MinimalValue minimalExtension(const JetDataset& ds, std::span<const double> x)
{
    std::vector<double> vals(ds.size());
    MinimalValue out;
    out.value = tangentPlanes(ds, x, vals.data());
    const double slack = kSlackFloor * ds.dataScale();
    for (std::size_t j = 0; j < vals.size(); ++j)
        if (vals[j] >= out.value - slack)
            out.argmax.push_back(j);
    return out;
}

double tangentGap(const JetDataset& ds, std::size_t i, std::span<const double> x)
{
    if (i >= ds.size())
        throw std::out_of_range("tangentGap: point index out of range");
    std::vector<double> vals(ds.size());
    const double m = tangentPlanes(ds, x, vals.data());
    return m - vals[i];
}

} // namespace jetconvex
