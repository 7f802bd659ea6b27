// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/verify.hpp"

#include "jetconvex/minimal.hpp"
#include "jetconvex/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jetconvex {

namespace {

void recordWitness(CheckReport& report, std::vector<double> x, std::vector<double> h,
                   double violation)
{
    Witness w{std::move(x), std::move(h), violation};
    auto pos = std::lower_bound(report.witnesses.begin(), report.witnesses.end(), w,
                                [](const Witness& a, const Witness& b) {
                                    return a.violation > b.violation;
                                });
    report.witnesses.insert(pos, std::move(w));
    if (report.witnesses.size() > 10)
        report.witnesses.pop_back();
}

void finish(CheckReport& report)
{
    report.passed = report.worstViolation <= report.threshold;
}

} // namespace

// ---------------------------------------------------------------------------
// Reference convex functions
// ---------------------------------------------------------------------------

ReferenceConvexFunction ReferenceConvexFunction::quadraticForm(std::size_t dim,
                                                               std::uint64_t seed)
{
    ReferenceConvexFunction f;
    f.kind_ = Kind::QuadraticForm;
    f.dim_ = dim;
    Rng rng(seed, 0x71756164ULL);

    // Random orthogonal basis by Gram-Schmidt on a Gaussian matrix.
    std::vector<std::vector<double>> basis(dim, std::vector<double>(dim));
    for (auto& row : basis) {
        for (;;) {
            for (auto& v : row)
                v = rng.normal();
            for (const auto& prev : basis) {
                if (&prev == &row)
                    break;
                double proj = std::inner_product(row.begin(), row.end(), prev.begin(), 0.0);
                for (std::size_t k = 0; k < dim; ++k)
                    row[k] -= proj * prev[k];
            }
            double norm = std::sqrt(std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
            if (norm > 1e-6) {
                for (auto& v : row)
                    v /= norm;
                break;
            }
        }
    }
    std::vector<double> eigen(dim);
    for (auto& e : eigen)
        e = rng.uniform(0.25, 1.5);

    f.quad_.assign(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = 0; k < dim; ++k)
                f.quad_[i * dim + j] += basis[k][i] * eigen[k] * basis[k][j];

    f.linear_.resize(dim);
    for (auto& v : f.linear_)
        v = rng.uniform(-0.5, 0.5);
    f.constant_ = rng.uniform(-0.5, 0.5);
    return f;
}

ReferenceConvexFunction ReferenceConvexFunction::logSumExp(std::size_t dim,
                                                           std::size_t pieces,
                                                           std::uint64_t seed)
{
    ReferenceConvexFunction f;
    f.kind_ = Kind::LogSumExp;
    f.dim_ = dim;
    f.pieceCount_ = std::max<std::size_t>(pieces, 2);
    Rng rng(seed, 0x6c7365ULL);
    f.temperature_ = rng.uniform(0.4, 1.0);
    f.pieces_.resize(f.pieceCount_ * (dim + 1));
    for (std::size_t k = 0; k < f.pieceCount_; ++k) {
        for (std::size_t j = 0; j < dim; ++j)
            f.pieces_[k * (dim + 1) + j] = rng.uniform(-1.0, 1.0);
        f.pieces_[k * (dim + 1) + dim] = rng.uniform(-0.5, 0.5);
    }
    return f;
}

ReferenceConvexFunction ReferenceConvexFunction::softplusMaxAffine(std::size_t dim,
                                                                   std::size_t pieces,
                                                                   std::uint64_t seed)
{
    ReferenceConvexFunction f = logSumExp(dim, pieces, seed ^ 0x5350ULL);
    f.kind_ = Kind::SoftplusMaxAffine;
    const double shrink = 1.0 / std::sqrt(static_cast<double>(f.pieceCount_));
    for (auto& v : f.pieces_)
        v *= shrink;
    return f;
}

double ReferenceConvexFunction::value(std::span<const double> x) const
{
    const std::size_t d = dim_;
    switch (kind_) {
    case Kind::QuadraticForm: {
        double v = constant_;
        for (std::size_t i = 0; i < d; ++i) {
            v += linear_[i] * x[i];
            double row = 0.0;
            for (std::size_t j = 0; j < d; ++j)
                row += quad_[i * d + j] * x[j];
            v += 0.5 * x[i] * row;
        }
        return v;
    }
    case Kind::LogSumExp: {
        double maxArg = -std::numeric_limits<double>::infinity();
        std::vector<double> args(pieceCount_);
        for (std::size_t k = 0; k < pieceCount_; ++k) {
            double a = pieces_[k * (d + 1) + d];
            for (std::size_t j = 0; j < d; ++j)
                a += pieces_[k * (d + 1) + j] * x[j];
            args[k] = a / temperature_;
            maxArg = std::max(maxArg, args[k]);
        }
        double sum = 0.0;
        for (double a : args)
            sum += std::exp(a - maxArg);
        return temperature_ * (maxArg + std::log(sum));
    }
    case Kind::SoftplusMaxAffine: {
        double v = 0.0;
        for (std::size_t k = 0; k < pieceCount_; ++k) {
            double a = pieces_[k * (d + 1) + d];
            for (std::size_t j = 0; j < d; ++j)
                a += pieces_[k * (d + 1) + j] * x[j];
            const double u = a / temperature_;
            v += temperature_ * (u > 0.0 ? u + std::log1p(std::exp(-u))
                                         : std::log1p(std::exp(u)));
        }
        return v;
    }
    }
    return 0.0;
}

std::vector<double> ReferenceConvexFunction::gradient(std::span<const double> x) const
{
    const std::size_t d = dim_;
    std::vector<double> g(d, 0.0);
    switch (kind_) {
    case Kind::QuadraticForm:
        for (std::size_t i = 0; i < d; ++i) {
            g[i] = linear_[i];
            for (std::size_t j = 0; j < d; ++j)
                g[i] += quad_[i * d + j] * x[j];
        }
        return g;
    case Kind::LogSumExp: {
        std::vector<double> args(pieceCount_);
        double maxArg = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pieceCount_; ++k) {
            double a = pieces_[k * (d + 1) + d];
            for (std::size_t j = 0; j < d; ++j)
                a += pieces_[k * (d + 1) + j] * x[j];
            args[k] = a / temperature_;
            maxArg = std::max(maxArg, args[k]);
        }
        double sum = 0.0;
        for (auto& a : args) {
            a = std::exp(a - maxArg);
            sum += a;
        }
        for (std::size_t k = 0; k < pieceCount_; ++k) {
            const double w = args[k] / sum;
            for (std::size_t j = 0; j < d; ++j)
                g[j] += w * pieces_[k * (d + 1) + j];
        }
        return g;
    }
    case Kind::SoftplusMaxAffine:
        for (std::size_t k = 0; k < pieceCount_; ++k) {
            double a = pieces_[k * (d + 1) + d];
            for (std::size_t j = 0; j < d; ++j)
                a += pieces_[k * (d + 1) + j] * x[j];
            const double u = a / temperature_;
            const double s = u > 0.0 ? 1.0 / (1.0 + std::exp(-u))
                                     : std::exp(u) / (1.0 + std::exp(u));
            for (std::size_t j = 0; j < d; ++j)
                g[j] += s * pieces_[k * (d + 1) + j];
        }
        return g;
    }
    return g;
}

JetDataset sampleJet(const ReferenceConvexFunction& ref,
                     const std::vector<std::vector<double>>& points)
{
    std::vector<JetPoint> records;
    records.reserve(points.size());
    for (const auto& p : points) {
        JetPoint rec;
        rec.x = p;
        rec.f = ref.value(p);
        rec.g = ref.gradient(p);
        records.push_back(std::move(rec));
    }
    return loadDataset(records, ref.dim());
}

std::vector<std::vector<double>> samplePoints(std::size_t dim, std::size_t count,
                                              double range, double minSeparation,
                                              std::uint64_t seed)
{
    Rng rng(seed, 0x707473ULL);
    std::vector<std::vector<double>> pts;
    std::size_t attempts = 0;
    while (pts.size() < count && attempts < 100 * count + 1000) {
        ++attempts;
        std::vector<double> p(dim);
        for (auto& c : p)
            c = rng.uniform(-range, range);
        bool ok = true;
        for (const auto& q : pts) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k)
                d2 += (p[k] - q[k]) * (p[k] - q[k]);
            if (d2 < minSeparation * minSeparation) {
                ok = false;
                break;
            }
        }
        if (ok)
            pts.push_back(std::move(p));
    }
    return pts;
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

CheckReport checkInterpolation(const ExtensionModel& model)
{
    CheckReport rep;
    rep.name = "interpolation";
    rep.threshold = 1e-9;
    rep.samples = model.dataset.size();
    const double scale = model.dataset.dataScale();
    for (std::size_t i = 0; i < model.dataset.size(); ++i) {
        const auto& p = model.dataset.point(i);
        const EnvelopeResult res = model.evaluate(p.x, EvalMode::Shared);
        const double viol = std::abs(res.upper - p.f) / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, p.x, {}, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkGradients(const ExtensionModel& model, double gradTol)
{
    CheckReport rep;
    rep.name = "gradients";
    rep.threshold = gradTol;
    rep.samples = model.dataset.size();
    const double scale = model.dataset.dataScale();
    for (std::size_t i = 0; i < model.dataset.size(); ++i) {
        const auto& p = model.dataset.point(i);
        const std::vector<double> grad = model.gradientAt(p.x);
        double err = 0.0;
        for (std::size_t k = 0; k < p.g.size(); ++k)
            err += (grad[k] - p.g[k]) * (grad[k] - p.g[k]);
        const double viol = std::sqrt(err) / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, p.x, {}, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkSandwich(const ExtensionModel& model, std::size_t samples,
                          std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "sandwich";
    rep.threshold = 1e-9;
    rep.samples = samples;
    // The bracket property needs the query column but not a verified dual;
    // skip column generation for throughput.
    ExtensionModel lean = model;
    lean.config.maxColumns = 0;
    const double scale = model.dataset.dataScale();
    Rng rng(seed, 0x73616e64ULL);
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        const EnvelopeResult res = lean.evaluate(x, EvalMode::Refined);
        if (res.status == EvalStatus::DegenerateAffine)
            break;
        const double m = model.minimal(x);
        const double g = model.upperFunction(x).value;
        const double viol = std::max(m - res.upper, res.upper - g) / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, x, {}, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkConvexity(const ExtensionModel& model, std::size_t samples,
                           std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "convexity";
    rep.threshold = 1e-9;
    rep.samples = samples;
    const double scale = model.dataset.dataScale();
    Rng rng(seed, 0x636f6e76ULL);
    const std::size_t d = model.dataset.dim();
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        const auto y = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        std::vector<double> mid(d);
        for (std::size_t k = 0; k < d; ++k)
            mid[k] = 0.5 * (x[k] + y[k]);
        const double ux = model.evaluate(x, EvalMode::Shared).upper;
        const double uy = model.evaluate(y, EvalMode::Shared).upper;
        const double um = model.evaluate(mid, EvalMode::Shared).upper;
        if (std::isnan(ux) || std::isnan(uy) || std::isnan(um))
            continue;
        const double viol = (um - 0.5 * (ux + uy)) / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, mid, {}, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkLipschitz(const ExtensionModel& model, std::size_t samples,
                           std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "lipschitz";
    rep.threshold = 1e-6; // multiplicative slack on 5 * sup|G|
    rep.samples = samples;
    Rng rng(seed, 0x6c6970ULL);
    const double bound = 5.0 * model.dataset.gradSupNorm();
    const double scale = model.dataset.dataScale();
    for (std::size_t s = 0; s < samples; ++s) {
        const auto x = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        const auto y = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        double dist = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            dist += (x[k] - y[k]) * (x[k] - y[k]);
        dist = std::sqrt(dist);
        if (dist < 1e-9 * scale)
            continue;
        const double qg =
            std::abs(model.upperFunction(x).value - model.upperFunction(y).value) / dist;
        const double qu = std::abs(model.evaluate(x, EvalMode::Shared).upper -
                                   model.evaluate(y, EvalMode::Shared).upper) /
                          dist;
        const double q = std::max(qg, qu);
        const double viol = bound > 0.0 ? (q - bound) / bound : q / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, x, {}, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkSecondDifference(const ExtensionModel& model, std::size_t samples,
                                  std::uint64_t seed, SecondDiffTarget target,
                                  double oracleGridStep)
{
    CheckReport rep;
    rep.samples = samples;
    const double scale = model.dataset.dataScale();
    const std::size_t d = model.dataset.dim();
    const double halfWidth = model.domainBox.maxHalfWidth();

    Envelope1D oracle;
    switch (target) {
    case SecondDiffTarget::SmoothedUpper:
        rep.name = "second-difference-g";
        rep.threshold = 1e-9;
        break;
    case SecondDiffTarget::Oracle1D:
        rep.name = "second-difference-oracle1d";
        rep.threshold = 10.0 * oracleGridStep;
        if (d != 1)
            throw std::invalid_argument("Oracle1D second difference needs d == 1");
        if (!model.degenerate())
            oracle = envelope1DOracle(model, oracleGridStep);
        break;
    case SecondDiffTarget::SharedEnvelope:
        rep.name = "second-difference-shared";
        rep.threshold = 1e-9;
        rep.gating = false; // kinks of the restricted envelope break the bound
        break;
    }
    if (model.degenerate()) {
        finish(rep);
        return rep;
    }

    auto eval = [&](std::span<const double> x) -> double {
        switch (target) {
        case SecondDiffTarget::SmoothedUpper:
            return model.upperFunction(x).value;
        case SecondDiffTarget::Oracle1D:
            return oracle.eval(x[0]);
        case SecondDiffTarget::SharedEnvelope:
            return model.evaluate(x, EvalMode::Shared).upper;
        }
        return 0.0;
    };

    Rng rng(seed, 0x32646966ULL);
    const double logLo = std::log(1e-4), logHi = std::log(0.5 * halfWidth);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<double> x = rng.boxPoint(model.domainBox.lo, model.domainBox.hi);
        const double hNorm = std::exp(rng.uniform(logLo, logHi));
        const std::vector<double> dir = rng.direction(d);
        std::vector<double> xp(d), xm(d), h(d);
        for (std::size_t k = 0; k < d; ++k) {
            h[k] = hNorm * dir[k];
            xp[k] = x[k] + h[k];
            xm[k] = x[k] - h[k];
        }
        if (target != SecondDiffTarget::SmoothedUpper &&
            (!model.domainBox.contains(xp) || !model.domainBox.contains(xm)))
            continue; // the envelope targets are only defined inside the box
        const double second = eval(xp) + eval(xm) - 2.0 * eval(x);
        const double bound = 2.0 * model.modulus.integral(2.0 * hNorm);
        const double viol = (second - bound) / scale;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, x, h, viol);
    }
    finish(rep);
    return rep;
}

CheckReport checkModulusChain(const ExtensionModel& model, std::size_t samples,
                              std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "modulus-chain";
    rep.threshold = 1e-9;
    rep.samples = samples;
    const ModulusModel& mod = model.modulus;
    if (model.degenerate()) {
        finish(rep);
        return rep;
    }
    Rng rng(seed, 0x636861696eULL);
    const double bstar = mod.gradDiameter;
    const std::size_t d = model.dataset.dim();
    const double radius = 2.0 * model.domainBox.maxHalfWidth();

    for (std::size_t s = 0; s < samples; ++s) {
        // Integral chain at log-spaced random t.
        const double t = std::exp(rng.uniform(std::log(1e-6), std::log(8.0 * radius + 1.0)));
        const double chain = (t * mod.value(t) - 2.0 * mod.integral(t)) /
                             std::max(1.0, bstar * t);
        if (chain > rep.worstViolation)
            rep.worstViolation = chain;

        // Radial gradient bound with constant 5.
        std::vector<double> x(d), z(d), gx(d), gz(d);
        for (std::size_t k = 0; k < d; ++k) {
            x[k] = rng.uniform(-radius, radius);
            z[k] = rng.uniform(-radius, radius);
        }
        mod.radialGradient(x.data(), d, gx.data());
        mod.radialGradient(z.data(), d, gz.data());
        double diff = 0.0, dist = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            diff += (gx[k] - gz[k]) * (gx[k] - gz[k]);
            dist += (x[k] - z[k]) * (x[k] - z[k]);
        }
        diff = std::sqrt(diff);
        dist = std::sqrt(dist);
        const double radial = (diff - 5.0 * mod.value(dist)) / std::max(bstar, 1e-300);
        if (radial > rep.worstViolation)
            rep.worstViolation = radial;
        recordWitness(rep, x, z, std::max(chain, radial));
    }
    finish(rep);
    return rep;
}

CheckReport checkModulusMajorization(const ExtensionModel& model, std::size_t samples,
                                     std::uint64_t seed)
{
    CheckReport rep;
    rep.name = "modulus-majorization";
    rep.threshold = 1e-12;
    rep.samples = samples;
    if (model.degenerate()) {
        finish(rep);
        return rep;
    }
    const PairTerms terms = extractPairTerms(model.slack);
    const ModulusModel& mod = model.modulus;
    const double bstar = std::max(mod.gradDiameter, 1e-300);
    Rng rng(seed, 0x6d616a6fULL);
    const double tHi = std::max(1.0, 16.0 * terms.maxKnee);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = std::exp(rng.uniform(std::log(1e-8), std::log(tHi)));
        const double raw = rawModulus(terms, t);
        const double env = exactEnvelope(terms, t).value;
        const double hat = mod.value(t);
        const double cap = std::min(mod.slopeCap * t, mod.gradDiameter);
        const double viol = std::max({raw - env, env - hat, hat - cap}) / bstar;
        if (viol > rep.worstViolation)
            rep.worstViolation = viol;
        recordWitness(rep, {t}, {}, viol);
    }
    finish(rep);
    return rep;
}

} // namespace jetconvex
