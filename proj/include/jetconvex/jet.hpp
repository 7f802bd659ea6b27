// SPDX-License-Identifier: Apache-2.0
//
// Finite 1-jet data (points, values, gradients), pairwise slacks, and the
// extendability validators.

#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace jetconvex {

/// One jet record: anchor point x, value f, prescribed gradient g.
struct JetPoint {
    std::vector<double> x;
    double f = 0.0;
    std::vector<double> g;
};

/// Thresholds for the pairwise validator, all relative to the data scale.
/// epsC loosens the convexity inequality (0 keeps it exact up to a 1e-12
/// rounding guard); a pair counts as an equality when its slack is below
/// epsP, and its gradients count as distinct when their gap exceeds epsG.
struct Tolerances {
    double epsC = 0.0;
    double epsP = 1e-9;
    double epsG = 1e-6;
};

/// Relative rounding guard applied on top of epsC, and the floor under
/// pairwise slacks wherever they appear in a denominator.
inline constexpr double kSlackFloor = 1e-12;

class JetDataset {
public:
    JetDataset() = default;

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<JetPoint>& points() const { return points_; }
    const JetPoint& point(std::size_t i) const { return points_[i]; }

    double gradSupNorm() const { return gradSupNorm_; }
    double gradDiameter() const { return gradDiameter_; }
    double dataScale() const { return dataScale_; }

    /// Coordinate-major views: coordinate k of every point / gradient,
    /// contiguous over points (the layout the kernels consume).
    const double* xCol(std::size_t k) const { return xCol_[k].data(); }
    const double* gCol(std::size_t k) const { return gCol_[k].data(); }
    const double* fVals() const { return f_.data(); }
    /// <g_j, x_j> per point.
    const double* gDotX() const { return gDotX_.data(); }
    /// f_j - <g_j, x_j> per point: the constant term of the tangent plane
    /// at x_j, so tangent_j(x) = tangentOffset()[j] + <g_j, x>.
    const double* tangentOffset() const { return tangentOffset_.data(); }

    friend JetDataset loadDataset(const std::vector<JetPoint>& records, std::size_t dim);

private:
    std::size_t dim_ = 0;
    std::vector<JetPoint> points_;
    std::vector<std::vector<double>> xCol_, gCol_;
    std::vector<double> f_, gDotX_, tangentOffset_;
    double gradSupNorm_ = 0.0;
    double gradDiameter_ = 0.0;
    double dataScale_ = 1.0;
};

/// Builds a dataset from raw records: merges exact duplicates, rejects
/// conflicting jets at a shared point, computes the derived norms.
/// Throws std::invalid_argument on dimension mismatch, non-finite entries,
/// or duplicate x with different (f, g).
JetDataset loadDataset(const std::vector<JetPoint>& records, std::size_t dim);

/// Pairwise slacks P(i,j) = f_i - f_j - <g_j, x_i - x_j> and gradient gaps
/// b(i,j) = |g_i - g_j|, both N x N row-major with exact zero diagonals.
struct SlackMatrix {
    std::size_t n = 0;
    std::vector<double> slack;   // P
    std::vector<double> gradGap; // b
    double dataScale = 1.0;

    double P(std::size_t i, std::size_t j) const { return slack[i * n + j]; }
    double b(std::size_t i, std::size_t j) const { return gradGap[i * n + j]; }
};

SlackMatrix computeSlack(const JetDataset& dataset);

enum class JetStatus { Valid, ViolatesC, ViolatesCW1 };

struct Violation {
    enum class Kind { C, CW1 } kind;
    std::size_t i, j;
    double magnitude; // slack P(i,j) for C, gradient gap b(i,j) for CW1
};

struct ValidationReport {
    JetStatus status = JetStatus::Valid;
    std::vector<Violation> violations;
    /// Smallest off-diagonal slack (+inf for a single point).
    double worstCSlack = std::numeric_limits<double>::infinity();
    /// min over equality-flagged pairs of P / max(b, epsG * scale)
    /// (+inf when nothing is flagged). Diagnostic only.
    double cw1Margin = std::numeric_limits<double>::infinity();
};

/// Checks conditions (C) and (CW1) pairwise. A pair violates (C) when
/// P(i,j) < -(epsC + rounding guard) * scale; it violates (CW1) when
/// P(i,j) <= epsP * scale while b(i,j) >= epsG * scale. Both orderings of
/// every pair are checked (P is not symmetric).
ValidationReport validate(const SlackMatrix& slack, const Tolerances& tol);

const char* statusString(JetStatus status);

} // namespace jetconvex
