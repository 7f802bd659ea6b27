// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/modulus.hpp"

#include "jetconvex/kernels.hpp"
#include "jetconvex/minimal.hpp"
#include "jetconvex/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jetconvex {

PairTerms extractPairTerms(const SlackMatrix& slack, const Tolerances& tol)
{
    const std::size_t n = slack.n;
    const double pFloor = kSlackFloor * slack.dataScale;
    const double bNoise = tol.epsG * slack.dataScale;

    PairTerms terms;
    terms.scale = slack.dataScale;
    terms.minKnee = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            const double p = slack.P(i, j);
            const double b = slack.b(i, j);
            if (p <= pFloor && b <= bNoise)
                continue;
            const double pc = std::max(p, pFloor);
            terms.gap.push_back(b);
            terms.slack.push_back(pc);
            terms.slackSqrt.push_back(std::sqrt(pc));
            terms.slopeCap = std::max(terms.slopeCap, b * b / (4.0 * pc));
            terms.maxGap = std::max(terms.maxGap, b);
            if (b > bNoise) {
                const double knee = 2.0 * pc / b;
                terms.minKnee = std::min(terms.minKnee, knee);
                terms.maxKnee = std::max(terms.maxKnee, knee);
            }
        }
    }
    if (!std::isfinite(terms.minKnee))
        terms.minKnee = 0.0;
    return terms;
}

double rawModulus(const PairTerms& terms, double t)
{
    if (!(t > 0.0))
        throw std::invalid_argument("rawModulus requires t > 0");
    if (terms.empty())
        return 0.0;
    return kernels::active().reluSubScaledMax(terms.gap.data(), terms.slack.data(),
                                              1.0 / t, terms.gap.size());
}

double rawModulus(const SlackMatrix& slack, double t, const Tolerances& tol)
{
    return rawModulus(extractPairTerms(slack, tol), t);
}

double rawModulusProbe(const JetDataset& ds, double t, double gridStep,
                       double searchRadius, std::size_t randomDirs,
                       std::uint64_t seed)
{
    if (!(t > 0.0) || !(gridStep > 0.0))
        throw std::invalid_argument("rawModulusProbe requires t > 0 and gridStep > 0");
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    const double radius = searchRadius > 0.0 ? std::min(searchRadius, t) : t;

    // Candidate directions: normalized gradient differences, then random.
    std::vector<std::vector<double>> dirs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                continue;
            std::vector<double> v(d);
            double norm = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                v[k] = ds.gCol(k)[j] - ds.gCol(k)[i];
                norm += v[k] * v[k];
            }
            if (norm <= 0.0)
                continue;
            norm = std::sqrt(norm);
            for (auto& c : v)
                c /= norm;
            dirs.push_back(std::move(v));
        }
    }
    Rng rng(seed, 0x70726f6265ULL);
    for (std::size_t r = 0; r < randomDirs; ++r)
        dirs.push_back(rng.direction(d));

    std::vector<double> radii;
    for (double r = gridStep; r < radius; r += gridStep)
        radii.push_back(r);
    radii.push_back(radius);

    double best = 0.0;
    std::vector<double> x(d), vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& v : dirs) {
            for (const double r : radii) {
                for (std::size_t k = 0; k < d; ++k)
                    x[k] = ds.xCol(k)[i] + r * v[k];
                const double m = tangentPlanes(ds, x, vals.data());
                best = std::max(best, (m - vals[i]) / r);
            }
        }
    }
    return best;
}

namespace {

/// Dual objective term c(s) = max over pairs of (b - 2*sqrt(P*s))+ .
double dualConstant(const PairTerms& terms, double s)
{
    return kernels::active().reluSubScaledMax(terms.gap.data(), terms.slackSqrt.data(),
                                              2.0 * std::sqrt(s), terms.gap.size());
}

/// A subgradient of c at s > 0 (0 when the max is clipped at zero).
double dualConstantSlope(const PairTerms& terms, double s)
{
    const double sqrtS = std::sqrt(s);
    const double twoSqrtS = 2.0 * sqrtS;
    double best = 0.0;
    std::size_t arg = terms.gap.size();
    for (std::size_t i = 0; i < terms.gap.size(); ++i) {
        const double v = terms.gap[i] - twoSqrtS * terms.slackSqrt[i];
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    if (arg == terms.gap.size())
        return 0.0; // clipped at zero: c is flat here
    return -terms.slackSqrt[arg] / sqrtS;
}

} // namespace

EnvelopePoint exactEnvelope(const PairTerms& terms, double t)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("exactEnvelope requires t >= 0");
    if (terms.empty() || terms.maxGap <= 0.0 || terms.slopeCap <= 0.0)
        return {0.0, 0.0};

    double lo = 0.0, hi = terms.slopeCap;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi); // > 0: hi stays positive
        if (t + dualConstantSlope(terms, mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double s = 0.5 * (lo + hi);
    return {s * t + dualConstant(terms, s), s};
}

EnvelopePoint exactEnvelope(const SlackMatrix& slack, double t, const Tolerances& tol)
{
    return exactEnvelope(extractPairTerms(slack, tol), t);
}

namespace {

struct Line {
    double slope, intercept;
};

/// Lower envelope of lines over t >= 0. Input in any order; output with
/// strictly decreasing slopes and strictly increasing intercepts.
std::vector<Line> lowerLineHull(std::vector<Line> lines)
{
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
        if (a.slope != b.slope)
            return a.slope > b.slope;
        return a.intercept < b.intercept;
    });

    std::vector<Line> hull;
    for (const Line& l : lines) {
        bool drop = false;
        while (!hull.empty()) {
            const Line& back = hull.back();
            if (l.slope == back.slope) {
                drop = true; // same slope, larger or equal intercept
                break;
            }
            if (l.intercept <= back.intercept) {
                hull.pop_back(); // l is lower at 0 and flatter: back never wins
                continue;
            }
            if (hull.size() >= 2) {
                const Line& a = hull[hull.size() - 2];
                const double tBack = (back.intercept - a.intercept) / (a.slope - back.slope);
                const double tNew = (l.intercept - a.intercept) / (a.slope - l.slope);
                if (tNew <= tBack) {
                    hull.pop_back(); // back is never the minimum
                    continue;
                }
            }
            break;
        }
        if (!drop)
            hull.push_back(l);
    }
    return hull;
}

} // namespace

ModulusModel buildModulus(const SlackMatrix& slack, std::size_t nodes, double tMax,
                          const Tolerances& tol)
{
    const PairTerms terms = extractPairTerms(slack, tol);

    ModulusModel model;
    model.gradDiameter = 0.0;
    for (std::size_t i = 0; i < slack.n; ++i)
        for (std::size_t j = i + 1; j < slack.n; ++j)
            model.gradDiameter = std::max(model.gradDiameter, slack.b(i, j));
    model.slopeCap = terms.slopeCap;
    model.degenerate = model.gradDiameter <= tol.epsG * slack.dataScale;
    if (model.degenerate)
        return model;

    if (tMax <= 0.0)
        tMax = terms.maxKnee > 0.0 ? 8.0 * terms.maxKnee : 1.0;

    std::vector<Line> lines;
    lines.push_back({terms.slopeCap, 0.0});
    lines.push_back({0.0, model.gradDiameter});

    if (nodes > 0) {
        double lo = terms.minKnee > 0.0 ? terms.minKnee / 8.0 : tMax / 256.0;
        lo = std::min(lo, tMax / 16.0);
        const double logLo = std::log(lo), logHi = std::log(tMax);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double frac = nodes == 1 ? 1.0 : static_cast<double>(i) / (nodes - 1);
            const double tNode = std::exp(logLo + frac * (logHi - logLo));
            const EnvelopePoint e = exactEnvelope(terms, tNode);
            // Tangent line of a concave function through the origin has a
            // nonnegative intercept; clamping only raises the line.
            lines.push_back({e.superSlope, std::max(0.0, e.value - e.superSlope * tNode)});
        }
    }

    std::vector<Line> hull = lowerLineHull(std::move(lines));

    model.slopes.reserve(hull.size());
    model.intercepts.reserve(hull.size());
    for (const Line& l : hull) {
        model.slopes.push_back(l.slope);
        model.intercepts.push_back(l.intercept);
    }
    model.knots.resize(hull.size() > 0 ? hull.size() - 1 : 0);
    model.phiAtKnot.resize(model.knots.size());
    double phi = 0.0, prev = 0.0;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
        const double knot = (hull[k + 1].intercept - hull[k].intercept) /
                            (hull[k].slope - hull[k + 1].slope);
        model.knots[k] = knot;
        phi += hull[k].intercept * (knot - prev) +
               0.5 * hull[k].slope * (knot * knot - prev * prev);
        model.phiAtKnot[k] = phi;
        prev = knot;
    }
    return model;
}

std::size_t ModulusModel::segmentFor(double t) const
{
    return static_cast<std::size_t>(
        std::upper_bound(knots.begin(), knots.end(), t) - knots.begin());
}

double ModulusModel::value(double t) const
{
    if (!(t >= 0.0))
        throw std::invalid_argument("modulus value requires t >= 0");
    if (degenerate)
        return 0.0;
    const std::size_t k = segmentFor(t);
    return slopes[k] * t + intercepts[k];
}

double ModulusModel::integral(double t) const
{
    if (!(t >= 0.0))
        throw std::invalid_argument("modulus integral requires t >= 0");
    if (degenerate)
        return 0.0;
    const std::size_t k = segmentFor(t);
    const double t0 = k == 0 ? 0.0 : knots[k - 1];
    const double phi0 = k == 0 ? 0.0 : phiAtKnot[k - 1];
    return phi0 + intercepts[k] * (t - t0) + 0.5 * slopes[k] * (t * t - t0 * t0);
}

void ModulusModel::radialGradient(const double* x, std::size_t d, double* out) const
{
    double norm = 0.0;
    for (std::size_t k = 0; k < d; ++k)
        norm += x[k] * x[k];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        std::fill(out, out + d, 0.0);
        return;
    }
    const double scale = value(norm) / norm;
    for (std::size_t k = 0; k < d; ++k)
        out[k] = scale * x[k];
}

} // namespace jetconvex
