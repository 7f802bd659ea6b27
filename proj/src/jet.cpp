// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/jet.hpp"

#include "jetconvex/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jetconvex {

namespace {

bool allFinite(const std::vector<double>& v)
{
    return std::all_of(v.begin(), v.end(), [](double c) { return std::isfinite(c); });
}

double dotSmall(const std::vector<double>& a, const std::vector<double>& b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

} // namespace

JetDataset loadDataset(const std::vector<JetPoint>& records, std::size_t dim)
{
    if (dim == 0)
        throw std::invalid_argument("dataset dimension must be >= 1");
    if (records.empty())
        throw std::invalid_argument("dataset needs at least one jet record");

    JetDataset ds;
    ds.dim_ = dim;
    ds.points_.reserve(records.size());

    for (std::size_t r = 0; r < records.size(); ++r) {
        const JetPoint& rec = records[r];
        if (rec.x.size() != dim || rec.g.size() != dim)
            throw std::invalid_argument("record " + std::to_string(r) +
                                        ": x and g must both have dimension " +
                                        std::to_string(dim));
        if (!allFinite(rec.x) || !allFinite(rec.g) || !std::isfinite(rec.f))
            throw std::invalid_argument("record " + std::to_string(r) +
                                        ": non-finite entry");

        bool merged = false;
        for (std::size_t k = 0; k < ds.points_.size(); ++k) {
            if (ds.points_[k].x != rec.x)
                continue;
            if (ds.points_[k].f == rec.f && ds.points_[k].g == rec.g) {
                merged = true; // exact duplicate
                break;
            }
            throw std::invalid_argument(
                "records " + std::to_string(k) + " and " + std::to_string(r) +
                " share the same point with conflicting jet data");
        }
        if (!merged)
            ds.points_.push_back(rec);
    }

    const std::size_t n = ds.points_.size();
    ds.xCol_.assign(dim, std::vector<double>(n));
    ds.gCol_.assign(dim, std::vector<double>(n));
    ds.f_.resize(n);
    ds.gDotX_.resize(n);
    ds.tangentOffset_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const JetPoint& p = ds.points_[i];
        for (std::size_t k = 0; k < dim; ++k) {
            ds.xCol_[k][i] = p.x[k];
            ds.gCol_[k][i] = p.g[k];
        }
        ds.f_[i] = p.f;
        ds.gDotX_[i] = dotSmall(p.g, p.x);
        ds.tangentOffset_[i] = ds.f_[i] - ds.gDotX_[i];
    }

    double maxAbsF = 0.0, gradSup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        maxAbsF = std::max(maxAbsF, std::abs(ds.f_[i]));
        gradSup = std::max(gradSup, std::sqrt(dotSmall(ds.points_[i].g, ds.points_[i].g)));
    }

    const auto& ops = kernels::active();
    double gradDiam = 0.0, pointDiam = 0.0;
    std::vector<double> acc(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t m = n - i - 1;
        std::fill(acc.begin(), acc.begin() + m, 0.0);
        for (std::size_t k = 0; k < dim; ++k)
            ops.sqDiffAcc(acc.data(), ds.gCol_[k].data() + i + 1, ds.gCol_[k][i], m);
        gradDiam = std::max(gradDiam, ops.reduceMax(acc.data(), m));

        std::fill(acc.begin(), acc.begin() + m, 0.0);
        for (std::size_t k = 0; k < dim; ++k)
            ops.sqDiffAcc(acc.data(), ds.xCol_[k].data() + i + 1, ds.xCol_[k][i], m);
        pointDiam = std::max(pointDiam, ops.reduceMax(acc.data(), m));
    }
    gradDiam = std::sqrt(gradDiam);
    pointDiam = std::sqrt(pointDiam);

    ds.gradSupNorm_ = gradSup;
    ds.gradDiameter_ = gradDiam;
    ds.dataScale_ = std::max({1.0, maxAbsF, pointDiam, gradSup});
    return ds;
}

SlackMatrix computeSlack(const JetDataset& ds)
{
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    const auto& ops = kernels::active();

    SlackMatrix out;
    out.n = n;
    out.dataScale = ds.dataScale();
    out.slack.assign(n * n, 0.0);
    out.gradGap.assign(n * n, 0.0);

    // Row i of P: P(i,j) = f_i - f_j - (<g_j, x_i> - <g_j, x_j>).
    std::vector<double> gyAtXi(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(gyAtXi.begin(), gyAtXi.end(), 0.0);
        for (std::size_t k = 0; k < d; ++k)
            ops.axpy(gyAtXi.data(), ds.gCol(k), ds.xCol(k)[i], n);
        ops.slackRow(out.slack.data() + i * n, ds.fVals(), gyAtXi.data(), ds.gDotX(),
                     ds.fVals()[i], n);
    }

    // Row i of b via explicit coordinate differences; squared-norm algebra
    // would cancel catastrophically for nearly equal gradients, and the
    // CW1 rule compares b against a 1e-6-scale threshold.
    std::vector<double> acc(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t k = 0; k < d; ++k)
            ops.sqDiffAcc(acc.data(), ds.gCol(k), ds.gCol(k)[i], n);
        ops.sqrtInPlace(acc.data(), n);
        std::copy(acc.begin(), acc.end(), out.gradGap.begin() + i * n);
    }

    for (std::size_t i = 0; i < n; ++i) {
        out.slack[i * n + i] = 0.0;
        out.gradGap[i * n + i] = 0.0;
    }
    return out;
}

ValidationReport validate(const SlackMatrix& slack, const Tolerances& tol)
{
    if (!(tol.epsP > 0.0) || !(tol.epsG > 0.0) || tol.epsC < 0.0)
        throw std::invalid_argument("tolerances need epsP > 0, epsG > 0, epsC >= 0");
    const std::size_t n = slack.n;
    const double scale = slack.dataScale;
    const double cBound = -(tol.epsC + kSlackFloor) * scale;
    const double pEq = tol.epsP * scale;
    const double bGap = tol.epsG * scale;

    ValidationReport rep;
    bool anyC = false, anyCW1 = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double p = slack.P(i, j);
            const double b = slack.b(i, j);
            rep.worstCSlack = std::min(rep.worstCSlack, p);
            if (p < cBound) {
                rep.violations.push_back({Violation::Kind::C, i, j, p});
                anyC = true;
            } else if (p <= pEq && b >= bGap) {
                rep.violations.push_back({Violation::Kind::CW1, i, j, b});
                anyCW1 = true;
            }
            if (p <= pEq)
                rep.cw1Margin = std::min(rep.cw1Margin, p / std::max(b, bGap));
        }
    }
    rep.status = anyC       ? JetStatus::ViolatesC
                 : anyCW1   ? JetStatus::ViolatesCW1
                            : JetStatus::Valid;
    return rep;
}

const char* statusString(JetStatus status)
{
    switch (status) {
    case JetStatus::Valid: return "valid";
    case JetStatus::ViolatesC: return "violates-C";
    case JetStatus::ViolatesCW1: return "violates-CW1";
    }
    return "unknown";
}

} // namespace jetconvex
