// SPDX-License-Identifier: Apache-2.0
//
// Gradient-modulus pipeline. For a validated jet the growth rate of the
// tangent gaps reduces, pair by pair, to
//
//     rawModulus(t) = max over ordered pairs (i,j) of  (b_ij - P_ij / t)+ ,
//
// where P is the pairwise slack and b the gradient gap. Each pair term is
// 0 on (0, P/b], then rises concavely towards b; its least concave majorant
// is min(initSlope * t, b - P/t) with initSlope = b^2 / (4P) and a knee at
// t = 2P/b. The least concave majorant E of the max over pairs is computed
// through its dual representation
//
//     E(t) = inf_{s >= 0} [ s*t + c(s) ],   c(s) = max_ij (b_ij - 2*sqrt(P_ij*s))+ ,
//
// since s*t + c(s) is the lowest line of slope s lying above rawModulus and
// the objective is convex in s with minimizer in [0, S0], S0 = max initSlope.
// The deliverable is a certified piecewise-linear concave majorant: the
// lower envelope of tangent lines of E collected at log-spaced nodes plus
// the two cap lines (S0, 0) and (0, B*). Every one of those lines majorizes
// rawModulus by construction, so the hull does too, at any node count.

#pragma once

#include "jetconvex/jet.hpp"

#include <cstdint>
#include <vector>

namespace jetconvex {

/// Ordered pairs that drive the modulus: slacks floored at
/// kSlackFloor * scale, pairs with (P below the floor and b below the epsG
/// threshold) dropped as noise.
struct PairTerms {
    std::vector<double> gap;       // b_ij
    std::vector<double> slack;     // P_ij, floored
    std::vector<double> slackSqrt; // sqrt of the floored slack
    double slopeCap = 0.0;         // S0 = max b^2 / (4P)
    double maxGap = 0.0;           // max b over kept pairs
    double minKnee = 0.0;          // min 2P/b over pairs with b above threshold
    double maxKnee = 0.0;
    double scale = 1.0;

    bool empty() const { return gap.empty(); }
};

PairTerms extractPairTerms(const SlackMatrix& slack, const Tolerances& tol = {});

/// Closed-form rawModulus at t > 0 (throws std::invalid_argument otherwise).
/// Value lies in [0, B*] and is nondecreasing in t.
double rawModulus(const PairTerms& terms, double t);
double rawModulus(const SlackMatrix& slack, double t, const Tolerances& tol = {});

/// Definitional probe of rawModulus: samples radii up to t on a grid of the
/// given step around every data point, along the pairwise gradient-gap
/// directions plus `randomDirs` seeded random directions, and evaluates the
/// tangent-gap ratio through minimalExtension. Returns a lower bound within
/// O(Lip * gridStep) of the true supremum. Test oracle; O(N^2 * grid) cost.
double rawModulusProbe(const JetDataset& ds, double t, double gridStep,
                       double searchRadius = 0.0, std::size_t randomDirs = 8,
                       std::uint64_t seed = 0);

struct EnvelopePoint {
    double value = 0.0;
    /// Supergradient: E(u) <= value + superSlope * (u - t) for all u >= 0.
    double superSlope = 0.0;
};

/// Exact concave envelope of rawModulus at t >= 0, via 60 bisection steps
/// on the dual objective over s in [0, S0]. The returned value never falls
/// below E(t) (any dual slope gives an upper line), so downstream majorants
/// stay certified.
EnvelopePoint exactEnvelope(const PairTerms& terms, double t);
EnvelopePoint exactEnvelope(const SlackMatrix& slack, double t, const Tolerances& tol = {});

/// Piecewise-linear concave modulus (lower envelope of lines) and its exact
/// piecewise-quadratic integral.
class ModulusModel {
public:
    bool degenerate = true;   // true iff all gradient gaps are below epsG * scale
    double gradDiameter = 0.0; // B*
    double slopeCap = 0.0;     // S0

    // Hull lines with strictly decreasing slopes and strictly increasing
    // intercepts; knots[k] is where line k hands over to line k+1;
    // phiAtKnot[k] is the integral up to knots[k].
    std::vector<double> slopes;
    std::vector<double> intercepts;
    std::vector<double> knots;
    std::vector<double> phiAtKnot;

    /// Modulus value at t >= 0 (piecewise linear, concave, nondecreasing,
    /// 0 at 0, bounded by B*). Throws std::invalid_argument for t < 0.
    double value(double t) const;

    /// Integral of the modulus from 0 to t (convex, C^1, derivative equals
    /// value()). Throws std::invalid_argument for t < 0.
    double integral(double t) const;

    /// Gradient of the radial profile x -> integral(|x|):
    /// value(|x|) * x / |x|, zero at the origin. out must have length d.
    void radialGradient(const double* x, std::size_t d, double* out) const;

private:
    std::size_t segmentFor(double t) const;
};

/// Assembles the modulus model: exact-envelope tangents at `nodes`
/// log-spaced points in [minKnee/8, tMax] plus the cap lines. tMax <= 0
/// selects the default 8 * maxKnee (1 when degenerate).
ModulusModel buildModulus(const SlackMatrix& slack, std::size_t nodes = 32,
                          double tMax = 0.0, const Tolerances& tol = {});

} // namespace jetconvex
