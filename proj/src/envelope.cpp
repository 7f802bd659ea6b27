// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/envelope.hpp"

#include "jetconvex/kernels.hpp"
#include "jetconvex/minimal.hpp"
#include "jetconvex/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jetconvex {

namespace {
constexpr double kQNaN = std::numeric_limits<double>::quiet_NaN();
}

bool Box::contains(std::span<const double> x, double slack) const
{
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (x[k] < lo[k] - slack || x[k] > hi[k] + slack)
            return false;
    return true;
}

void Box::clampInto(std::vector<double>& x) const
{
    for (std::size_t k = 0; k < lo.size(); ++k)
        x[k] = std::min(hi[k], std::max(lo[k], x[k]));
}

double Box::maxHalfWidth() const
{
    double w = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k)
        w = std::max(w, 0.5 * (hi[k] - lo[k]));
    return w;
}

std::vector<std::vector<double>> Box::corners() const
{
    const std::size_t d = lo.size();
    std::vector<std::vector<double>> out;
    out.reserve(std::size_t{1} << d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        std::vector<double> c(d);
        for (std::size_t k = 0; k < d; ++k)
            c[k] = (mask >> k) & 1 ? hi[k] : lo[k];
        out.push_back(std::move(c));
    }
    return out;
}

Box defaultDomainBox(const JetDataset& ds)
{
    const std::size_t d = ds.dim();
    Box box;
    box.lo.resize(d);
    box.hi.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
        const auto* col = ds.xCol(k);
        double lo = col[0], hi = col[0];
        for (std::size_t i = 1; i < ds.size(); ++i) {
            lo = std::min(lo, col[i]);
            hi = std::max(hi, col[i]);
        }
        const double center = 0.5 * (lo + hi);
        const double half = std::max(1.5 * 0.5 * (hi - lo), 1.0);
        box.lo[k] = center - half;
        box.hi[k] = center + half;
    }
    return box;
}

GValue smoothedUpper(const JetDataset& ds, const ModulusModel& modulus,
                     std::span<const double> x)
{
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    GValue out;
    out.subgradient.resize(d);

    if (modulus.degenerate) {
        const JetPoint& p0 = ds.point(0);
        double v = p0.f;
        for (std::size_t k = 0; k < d; ++k)
            v += p0.g[k] * (x[k] - p0.x[k]);
        out.value = v;
        out.activeIndex = 0;
        out.subgradient = p0.g;
        return out;
    }

    const auto& ops = kernels::active();
    std::vector<double> vals(n), dist(n, 0.0);
    std::copy(ds.tangentOffset(), ds.tangentOffset() + n, vals.data());
    for (std::size_t k = 0; k < d; ++k) {
        ops.axpy(vals.data(), ds.gCol(k), x[k], n);
        ops.sqDiffAcc(dist.data(), ds.xCol(k), x[k], n);
    }
    ops.sqrtInPlace(dist.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        vals[i] += 2.0 * modulus.integral(dist[i]);

    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (vals[i] < vals[arg])
            arg = i;

    out.value = vals[arg];
    out.activeIndex = arg;
    const JetPoint& pa = ds.point(arg);
    const double r = dist[arg];
    if (r > 0.0) {
        const double s = 2.0 * modulus.value(r) / r;
        for (std::size_t k = 0; k < d; ++k)
            out.subgradient[k] = pa.g[k] + s * (x[k] - pa.x[k]);
    } else {
        out.subgradient = pa.g;
    }
    return out;
}

double ExtensionModel::minimal(std::span<const double> x) const
{
    std::vector<double> vals(dataset.size());
    return tangentPlanes(dataset, x, vals.data());
}

GValue ExtensionModel::upperFunction(std::span<const double> x) const
{
    return smoothedUpper(dataset, modulus, x);
}

namespace {

EnvelopeResult degenerateResult(const JetDataset& ds, std::span<const double> x)
{
    const JetPoint& p0 = ds.point(0);
    EnvelopeResult res;
    res.status = EvalStatus::DegenerateAffine;
    double v = p0.f;
    for (std::size_t k = 0; k < ds.dim(); ++k)
        v += p0.g[k] * (x[k] - p0.x[k]);
    res.upper = res.lower = v;
    res.gradient = p0.g;
    res.dualSlope = p0.g;
    res.dualOffset = p0.f;
    for (std::size_t k = 0; k < ds.dim(); ++k)
        res.dualOffset -= p0.g[k] * p0.x[k];
    return res;
}

std::uint64_t hashPoint(std::span<const double> x, std::uint64_t seed)
{
    std::uint64_t h = mix64(seed ^ 0x7175657279ULL);
    for (double c : x)
        h = mix64(h ^ std::bit_cast<std::uint64_t>(c));
    return h;
}

struct LpRun {
    LpSolution sol;
    double dualAt(std::span<const double> x) const
    {
        double v = sol.dual.empty() ? 0.0 : sol.dual.back();
        for (std::size_t k = 0; k + 1 < sol.dual.size(); ++k)
            v += sol.dual[k] * x[k];
        return v;
    }
};

LpRun solveOver(const std::vector<const std::vector<double>*>& pts,
                const std::vector<double>& costs, std::span<const double> x,
                double tol)
{
    const std::size_t d = x.size();
    LpProblem lp;
    lp.rows = d + 1;
    lp.cols = pts.size();
    lp.cost = costs;
    lp.tol = tol;
    lp.columns.resize(lp.cols * lp.rows);
    for (std::size_t j = 0; j < pts.size(); ++j) {
        for (std::size_t k = 0; k < d; ++k)
            lp.columns[j * lp.rows + k] = (*pts[j])[k];
        lp.columns[j * lp.rows + d] = 1.0;
    }
    lp.rhs.assign(x.begin(), x.end());
    lp.rhs.push_back(1.0);
    return {solveLp(lp)};
}

/// Multistart subgradient descent on z -> g(z) - <p, z> - q inside the box.
/// Returns the most violating point found and its value.
struct ViolationSearch {
    std::vector<double> point;
    double value = std::numeric_limits<double>::infinity();
};

ViolationSearch findViolation(const ExtensionModel& model, std::span<const double> x,
                              const LpRun& run,
                              const std::vector<const std::vector<double>*>& work,
                              Rng& rng)
{
    const JetDataset& ds = model.dataset;
    const std::size_t d = ds.dim();
    const std::size_t numStarts = model.config.searchStarts
                                      ? model.config.searchStarts
                                      : 2 * d + 4;

    auto residual = [&](std::span<const double> z) {
        return smoothedUpper(ds, model.modulus, z).value - run.dualAt(z);
    };

    std::vector<std::vector<double>> starts;
    starts.emplace_back(x.begin(), x.end());

    // Closest data points.
    std::vector<std::pair<double, std::size_t>> order(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = ds.xCol(k)[i] - x[k];
            d2 += diff * diff;
        }
        order[i] = {d2, i};
    }
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < std::min(ds.size(), d + 2) && starts.size() < numStarts; ++i)
        starts.push_back(ds.point(order[i].second).x);

    // Current support columns.
    std::size_t supportAdded = 0;
    for (std::size_t j = 0; j < run.sol.lambda.size() && supportAdded < 2 &&
                            starts.size() < numStarts;
         ++j) {
        if (run.sol.lambda[j] > 1e-12) {
            starts.push_back(*work[j]);
            ++supportAdded;
        }
    }

    while (starts.size() < numStarts)
        starts.push_back(rng.boxPoint(model.domainBox.lo, model.domainBox.hi));

    const double scale = ds.dataScale();
    const double halfWidth = model.domainBox.maxHalfWidth();

    ViolationSearch best;
    std::vector<double> z(d), trial(d), sub(d);
    for (const auto& start : starts) {
        z = start;
        model.domainBox.clampInto(z);
        double v = residual(z);
        double step = 0.25 * halfWidth;
        for (std::size_t it = 0; it < model.config.searchIters; ++it) {
            const GValue g = smoothedUpper(ds, model.modulus, z);
            double norm = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                sub[k] = g.subgradient[k] - run.sol.dual[k];
                norm += sub[k] * sub[k];
            }
            norm = std::sqrt(norm);
            if (norm < 1e-14 * scale)
                break;

            bool accepted = false;
            for (double s = 2.0 * step; s > 1e-13 * halfWidth; s *= 0.5) {
                for (std::size_t k = 0; k < d; ++k)
                    trial[k] = z[k] - s * sub[k] / norm;
                model.domainBox.clampInto(trial);
                if (trial == z)
                    continue;
                const double vt = residual(trial);
                if (vt < v - 1e-15 * scale) {
                    z = trial;
                    v = vt;
                    step = s;
                    accepted = true;
                    break;
                }
            }
            if (!accepted)
                break;
        }
        if (v < best.value) {
            best.value = v;
            best.point = z;
        }
    }
    return best;
}

} // namespace

namespace {

/// Refined evaluation state: final LP run over candidates + query column +
/// generated columns, with the generated points kept for reuse.
struct RefineOutcome {
    LpRun run;
    std::vector<std::vector<double>> extra; // query column, then generated points
    std::vector<double> costs;              // candidates then extra, in order
    bool verified = false;
    double worstResidual = 0.0;
};

RefineOutcome refineLoop(const ExtensionModel& model, std::span<const double> x)
{
    RefineOutcome out;
    std::vector<const std::vector<double>*> work;
    work.reserve(model.candidates.size() + model.config.maxColumns + 1);
    for (const auto& c : model.candidates)
        work.push_back(&c);
    out.costs = model.gValues;

    // work holds pointers into extra; the reserve keeps them stable (at
    // most the query plus maxColumns generated columns are pushed).
    out.extra.reserve(model.config.maxColumns + 1);
    const std::vector<double> xVec(x.begin(), x.end());
    if (std::find(model.candidates.begin(), model.candidates.end(), xVec) ==
        model.candidates.end()) {
        out.extra.push_back(xVec);
        work.push_back(&out.extra.back());
        out.costs.push_back(smoothedUpper(model.dataset, model.modulus, x).value);
    }

    const double residTol = model.config.lpTol * model.dataset.dataScale();
    Rng rng(model.config.seed, hashPoint(x, 0xc01dULL));
    out.run = solveOver(work, out.costs, x, model.config.lpTol);

    if (out.run.sol.status != LpStatus::Optimal || model.config.maxColumns == 0)
        return out;

    std::size_t added = 0;
    for (;;) {
        const ViolationSearch found = findViolation(model, x, out.run, work, rng);
        if (!(found.value < -residTol)) {
            out.verified = true;
            out.worstResidual = std::min(0.0, found.value);
            break;
        }
        if (added >= model.config.maxColumns)
            break;
        out.extra.push_back(found.point);
        work.push_back(&out.extra.back());
        out.costs.push_back(smoothedUpper(model.dataset, model.modulus, out.extra.back()).value);
        ++added;
        LpRun next = solveOver(work, out.costs, x, model.config.lpTol);
        if (next.sol.status != LpStatus::Optimal)
            break;
        out.run = next;
    }
    return out;
}

} // namespace

EnvelopeResult ExtensionModel::evaluate(std::span<const double> x, EvalMode mode) const
{
    const std::size_t d = dataset.dim();
    if (x.size() != d)
        throw std::invalid_argument("query dimension mismatch");

    if (degenerate())
        return degenerateResult(dataset, x);

    EnvelopeResult res;
    if (!domainBox.contains(x)) {
        res.status = EvalStatus::OutsideDomain;
        res.upper = res.lower = kQNaN;
        return res;
    }

    LpRun run;
    std::vector<std::vector<double>> extra;
    bool verified = false;
    double worstResidual = 0.0;
    if (mode == EvalMode::Shared) {
        std::vector<const std::vector<double>*> work;
        work.reserve(candidates.size());
        for (const auto& c : candidates)
            work.push_back(&c);
        run = solveOver(work, gValues, x, config.lpTol);
    } else {
        RefineOutcome outcome = refineLoop(*this, x);
        run = std::move(outcome.run);
        extra = std::move(outcome.extra);
        verified = outcome.verified;
        worstResidual = outcome.worstResidual;
    }

    if (run.sol.status == LpStatus::Infeasible) {
        res.status = EvalStatus::OutsideDomain;
        res.upper = res.lower = kQNaN;
        return res;
    }
    if (run.sol.status != LpStatus::Optimal) {
        res.status = EvalStatus::NumericFailure;
        res.upper = res.lower = kQNaN;
        return res;
    }

    res.status = EvalStatus::Ok;
    res.upper = run.sol.objective;
    double lower = minimal(x);
    if (verified)
        lower = std::max(lower, run.dualAt(x) + worstResidual);
    res.lower = std::min(lower, res.upper); // bracket never inverts past tolerance
    for (std::size_t j = 0; j < run.sol.lambda.size(); ++j) {
        if (run.sol.lambda[j] > 1e-12) {
            SupportEntry e;
            e.candidateIndex = j < candidates.size() ? j : SupportEntry::npos;
            e.point = j < candidates.size() ? candidates[j] : extra[j - candidates.size()];
            e.weight = run.sol.lambda[j];
            res.support.push_back(std::move(e));
        }
    }
    res.dualSlope.assign(run.sol.dual.begin(), run.sol.dual.end() - 1);
    res.dualOffset = run.sol.dual.back();
    res.gradient = res.dualSlope;
    return res;
}

ExtensionModel::GradientEstimate
ExtensionModel::gradientEstimate(std::span<const double> x) const
{
    const std::size_t d = dataset.dim();
    if (x.size() != d)
        throw std::invalid_argument("query dimension mismatch");

    GradientEstimate est;
    if (degenerate()) {
        est.gradient = dataset.point(0).g;
        est.fdGradient = est.gradient;
        est.dualAvailable = true;
        return est;
    }

    const RefineOutcome outcome = refineLoop(*this, x);
    if (outcome.run.sol.status == LpStatus::Optimal) {
        est.dualAvailable = true;
        est.gradient.assign(outcome.run.sol.dual.begin(), outcome.run.sol.dual.end() - 1);
    }

    // Central differences of the envelope over the already generated column
    // set; each probe carries its own query column so the value never
    // exceeds the upper function there.
    std::vector<const std::vector<double>*> work;
    work.reserve(candidates.size() + outcome.extra.size() + 1);
    for (const auto& c : candidates)
        work.push_back(&c);
    for (const auto& e : outcome.extra)
        work.push_back(&e);

    const double h = 1e-5 * dataset.dataScale();
    est.fdGradient.assign(d, 0.0);
    std::vector<double> probe(x.begin(), x.end());
    std::vector<double> costs = outcome.costs;
    for (std::size_t k = 0; k < d; ++k) {
        double side[2] = {0.0, 0.0};
        for (int s = 0; s < 2; ++s) {
            probe[k] = x[k] + (s == 0 ? h : -h);
            std::vector<double> probeVec = probe;
            work.push_back(&probeVec);
            costs.push_back(smoothedUpper(dataset, modulus, probeVec).value);
            const LpRun run = solveOver(work, costs, probe, config.lpTol);
            side[s] = run.sol.status == LpStatus::Optimal
                          ? run.sol.objective
                          : std::numeric_limits<double>::quiet_NaN();
            work.pop_back();
            costs.pop_back();
        }
        probe[k] = x[k];
        est.fdGradient[k] = (side[0] - side[1]) / (2.0 * h);
    }
    if (!est.dualAvailable)
        est.gradient = est.fdGradient;
    return est;
}

std::vector<double> ExtensionModel::gradientAt(std::span<const double> x) const
{
    return gradientEstimate(x).gradient;
}

ExtensionModel buildExtension(JetDataset dataset, SlackMatrix slack,
                              ModulusModel modulus, Box domainBox,
                              SolverConfig config)
{
    const std::size_t d = dataset.dim();
    if (domainBox.lo.size() != d || domainBox.hi.size() != d)
        throw std::invalid_argument("domain box dimension mismatch");
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (!domainBox.contains(dataset.point(i).x))
            throw std::invalid_argument("domain box excludes data point " +
                                        std::to_string(i));

    ExtensionModel model;
    model.dataset = std::move(dataset);
    model.slack = std::move(slack);
    model.modulus = std::move(modulus);
    model.domainBox = std::move(domainBox);
    model.config = config;

    for (std::size_t i = 0; i < model.dataset.size(); ++i)
        model.candidates.push_back(model.dataset.point(i).x);

    if (d <= 10) {
        for (auto& c : model.domainBox.corners())
            model.candidates.push_back(std::move(c));
    } else {
        model.cornerSampled = true;
        Rng rng(config.seed, 0x636f726eULL);
        for (std::size_t i = 0; i < 2 * d + 2; ++i)
            model.candidates.push_back(rng.boxPoint(model.domainBox.lo, model.domainBox.hi));
    }

    for (auto& p : haltonBoxPoints(config.enrichment, model.domainBox.lo,
                                   model.domainBox.hi, config.seed))
        model.candidates.push_back(std::move(p));

    // Exact duplicates confuse nothing but waste columns.
    std::vector<std::vector<double>> unique;
    unique.reserve(model.candidates.size());
    for (auto& c : model.candidates)
        if (std::find(unique.begin(), unique.end(), c) == unique.end())
            unique.push_back(std::move(c));
    model.candidates = std::move(unique);

    model.gValues.reserve(model.candidates.size());
    for (const auto& c : model.candidates)
        model.gValues.push_back(smoothedUpper(model.dataset, model.modulus, c).value);

    return model;
}

Envelope1D envelope1DOracle(const ExtensionModel& model, double gridStep)
{
    if (model.dataset.dim() != 1)
        throw std::invalid_argument("envelope1DOracle requires a 1-d model");
    if (!(gridStep > 0.0))
        throw std::invalid_argument("envelope1DOracle requires gridStep > 0");

    const double lo = model.domainBox.lo[0], hi = model.domainBox.hi[0];
    Envelope1D out;
    for (double x = lo; x < hi; x += gridStep)
        out.gridX.push_back(x);
    out.gridX.push_back(hi);
    out.gridG.reserve(out.gridX.size());
    for (double x : out.gridX)
        out.gridG.push_back(smoothedUpper(model.dataset, model.modulus, {&x, 1}).value);

    // Monotone chain, lower hull; collinear middles are dropped.
    std::vector<std::size_t> hull;
    auto cross = [&](std::size_t a, std::size_t b, std::size_t c) {
        return (out.gridX[b] - out.gridX[a]) * (out.gridG[c] - out.gridG[a]) -
               (out.gridG[b] - out.gridG[a]) * (out.gridX[c] - out.gridX[a]);
    };
    for (std::size_t i = 0; i < out.gridX.size(); ++i) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0)
            hull.pop_back();
        hull.push_back(i);
    }
    for (std::size_t i : hull) {
        out.hullX.push_back(out.gridX[i]);
        out.hullV.push_back(out.gridG[i]);
    }
    return out;
}

double Envelope1D::eval(double x) const
{
    if (x <= hullX.front())
        return hullV.front();
    if (x >= hullX.back())
        return hullV.back();
    const auto it = std::upper_bound(hullX.begin(), hullX.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - hullX.begin());
    const double t = (x - hullX[j - 1]) / (hullX[j] - hullX[j - 1]);
    return hullV[j - 1] + t * (hullV[j] - hullV[j - 1]);
}

const char* statusString(EvalStatus status)
{
    switch (status) {
    case EvalStatus::Ok: return "ok";
    case EvalStatus::OutsideDomain: return "outside-domain";
    case EvalStatus::DegenerateAffine: return "degenerate-affine";
    case EvalStatus::NumericFailure: return "numeric-failure";
    }
    return "unknown";
}

} // namespace jetconvex
