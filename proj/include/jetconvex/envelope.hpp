// SPDX-License-Identifier: Apache-2.0
//
// Evaluable convex extension. Three layers, in increasing tightness:
//
//   minimal(x)        max of the data's tangent planes (convex lower bound)
//   smoothedUpper(x)  min_i [ f_i + <g_i, x - x_i> + 2 * phi(|x - x_i|) ]
//                     with phi the modulus integral: a Lipschitz upper
//                     function pinned to the jet, majorizing minimal()
//   evaluate(x)       restricted convex envelope of smoothedUpper over a
//                     finite candidate set, solved as a small LP; shared
//                     mode keeps the candidate set fixed (the result is a
//                     globally convex piecewise-affine function), refined
//                     mode tightens per query by column generation against
//                     the LP's dual affine minorant.
//
// Every evaluation returns a certified bracket [lower, upper] around the
// true envelope value, which collapses at the data points.

#pragma once

#include "jetconvex/jet.hpp"
#include "jetconvex/lp.hpp"
#include "jetconvex/modulus.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace jetconvex {

struct Box {
    std::vector<double> lo, hi;

    std::size_t dim() const { return lo.size(); }
    bool contains(std::span<const double> x, double slack = 0.0) const;
    void clampInto(std::vector<double>& x) const;
    double maxHalfWidth() const;
    std::vector<std::vector<double>> corners() const; // 2^d points, d <= 10
};

/// Bounding box of the data points inflated by 50% per axis, with a minimum
/// half-width of 1.
Box defaultDomainBox(const JetDataset& ds);

struct SolverConfig {
    double lpTol = 1e-10;          // relative LP + column-generation tolerance
    std::size_t enrichment = 16;   // quasi-random interior candidates
    std::uint64_t seed = 0;
    std::size_t maxColumns = 256;  // column-generation additions per query
    std::size_t searchStarts = 0;  // 0: default 2d + 4
    std::size_t searchIters = 50;  // descent iterations per start
    std::size_t nodes = 32;        // modulus nodes (recorded at build time)
    double tMax = 0.0;             // modulus horizon (0: auto)
    bool forcedBuild = false;      // validation overridden at build time
};

enum class EvalMode { Shared, Refined };
enum class EvalStatus { Ok, OutsideDomain, DegenerateAffine, NumericFailure };

struct SupportEntry {
    std::size_t candidateIndex; // npos for a column generated during refine
    std::vector<double> point;
    double weight;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct EnvelopeResult {
    EvalStatus status = EvalStatus::NumericFailure;
    double upper = 0.0;
    double lower = 0.0;
    std::vector<SupportEntry> support;
    std::vector<double> dualSlope; // p: affine minorant z -> <p, z> + dualOffset
    double dualOffset = 0.0;       // q
    std::vector<double> gradient;  // = p
};

struct GValue {
    double value = 0.0;
    std::size_t activeIndex = 0;
    std::vector<double> subgradient;
};

/// Smoothed upper function of a dataset + modulus pair. Degenerate models
/// short-circuit to the tangent plane of the first data point.
GValue smoothedUpper(const JetDataset& ds, const ModulusModel& modulus,
                     std::span<const double> x);

class ExtensionModel {
public:
    JetDataset dataset;
    SlackMatrix slack;
    ModulusModel modulus;
    Box domainBox;
    SolverConfig config;
    std::vector<std::vector<double>> candidates; // data points + corners + enrichment
    std::vector<double> gValues;                 // smoothedUpper at each candidate
    bool cornerSampled = false; // d > 10: corners replaced by a random sample

    bool degenerate() const { return modulus.degenerate; }

    double minimal(std::span<const double> x) const;
    GValue upperFunction(std::span<const double> x) const;

    EnvelopeResult evaluate(std::span<const double> x, EvalMode mode) const;

    /// Gradient with its own cross-check: `gradient` is the refined dual
    /// slope, `fdGradient` the central difference (step 1e-5 * dataScale)
    /// of the envelope over the same generated column set.
    struct GradientEstimate {
        std::vector<double> gradient;
        std::vector<double> fdGradient;
        bool dualAvailable = false;
    };
    GradientEstimate gradientEstimate(std::span<const double> x) const;

    /// Gradient estimate: the refined dual slope, falling back to central
    /// finite differences of the upper value (step 1e-5 * dataScale) when
    /// the dual is unavailable.
    std::vector<double> gradientAt(std::span<const double> x) const;
};

/// Assembles the model; throws std::invalid_argument when the box excludes
/// a data point.
ExtensionModel buildExtension(JetDataset dataset, SlackMatrix slack,
                              ModulusModel modulus, Box domainBox,
                              SolverConfig config);

/// Desk-scale reference for d = 1: samples smoothedUpper on a grid and
/// takes the lower convex hull by a monotone-chain pass.
struct Envelope1D {
    std::vector<double> gridX, gridG;
    std::vector<double> hullX, hullV;

    double eval(double x) const; // linear interpolation along the hull
};

Envelope1D envelope1DOracle(const ExtensionModel& model, double gridStep);

const char* statusString(EvalStatus status);

} // namespace jetconvex
