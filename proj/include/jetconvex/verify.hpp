// SPDX-License-Identifier: Apache-2.0
//
// Executable checks for the extension's contract (interpolation, gradient
// match, sandwich, convexity, Lipschitz bound, second-difference modulus,
// modulus chain), plus smooth convex reference functions whose sampled jets
// must always validate. Every check is reproducible bit-for-bit from
// (model, seed).

#pragma once

#include "jetconvex/envelope.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace jetconvex {

struct Witness {
    std::vector<double> x;
    std::vector<double> h; // empty when the check has no offset parameter
    double violation = 0.0;
};

struct CheckReport {
    std::string name;
    std::size_t samples = 0;
    double worstViolation = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool gating = true; // diagnostics set this false and never gate exit codes
    std::vector<Witness> witnesses; // up to 10 worst samples
};

/// Smooth convex test functions with closed-form gradients; gradients are
/// uniformly continuous on bounded sets by construction.
class ReferenceConvexFunction {
public:
    enum class Kind { QuadraticForm, LogSumExp, SoftplusMaxAffine };

    static ReferenceConvexFunction quadraticForm(std::size_t dim, std::uint64_t seed);
    static ReferenceConvexFunction logSumExp(std::size_t dim, std::size_t pieces,
                                             std::uint64_t seed);
    static ReferenceConvexFunction softplusMaxAffine(std::size_t dim, std::size_t pieces,
                                                     std::uint64_t seed);

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }

    double value(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;

private:
    Kind kind_ = Kind::QuadraticForm;
    std::size_t dim_ = 1;
    std::vector<double> quad_;   // d x d, row-major (quadratic form)
    std::vector<double> linear_; // d
    double constant_ = 0.0;
    std::vector<double> pieces_; // K x (d+1): rows (a_k, b_k)
    double temperature_ = 1.0;
    std::size_t pieceCount_ = 0;
};

/// Samples the 1-jet of a reference function at the given points.
JetDataset sampleJet(const ReferenceConvexFunction& ref,
                     const std::vector<std::vector<double>>& points);

/// Random well-separated points in [-range, range]^d.
std::vector<std::vector<double>> samplePoints(std::size_t dim, std::size_t count,
                                              double range, double minSeparation,
                                              std::uint64_t seed);

CheckReport checkInterpolation(const ExtensionModel& model);
CheckReport checkGradients(const ExtensionModel& model, double gradTol = 1e-4);
CheckReport checkSandwich(const ExtensionModel& model, std::size_t samples,
                          std::uint64_t seed);
CheckReport checkConvexity(const ExtensionModel& model, std::size_t samples,
                           std::uint64_t seed);
CheckReport checkLipschitz(const ExtensionModel& model, std::size_t samples,
                           std::uint64_t seed);

enum class SecondDiffTarget { SmoothedUpper, Oracle1D, SharedEnvelope };

/// Second-difference modulus bound F(x+h) + F(x-h) - 2F(x) <= 2*phi(2|h|).
/// Gated on the smoothed upper function and (for d = 1) on the hull oracle;
/// diagnostic only on the shared restricted envelope, whose kinks between
/// candidates may break the bound.
CheckReport checkSecondDifference(const ExtensionModel& model, std::size_t samples,
                                  std::uint64_t seed,
                                  SecondDiffTarget target = SecondDiffTarget::SmoothedUpper,
                                  double oracleGridStep = 1e-3);

/// Modulus chain t * omega(t) <= 2 * phi(t) and the radial-gradient bound
/// |grad phi(|x|) - grad phi(|z|)| <= 5 * omega(|x - z|).
CheckReport checkModulusChain(const ExtensionModel& model, std::size_t samples,
                              std::uint64_t seed);

/// rawModulus <= exact envelope <= PL majorant <= min(S0 * t, B*) at
/// sampled t.
CheckReport checkModulusMajorization(const ExtensionModel& model, std::size_t samples,
                                     std::uint64_t seed);

} // namespace jetconvex
