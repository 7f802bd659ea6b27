// SPDX-License-Identifier: Apache-2.0
//
// Dense simplex for the small equality-form programs behind envelope
// evaluation:
//
//     minimize    cost . lambda
//     subject to  sum_j lambda_j * column_j = rhs,   lambda >= 0
//
// where column_j is a candidate point lifted to (s_j, 1) and rhs = (x, 1),
// so feasible points are convex-combination weights. Two-phase start from
// the artificial basis, Bland's entering/leaving rule throughout (lowest
// index; anti-cycling), reduced costs recomputed from the tableau each
// iteration. Problems have at most a dozen rows; robustness over speed.

#pragma once

#include <cstddef>
#include <vector>

namespace jetconvex {

struct LpProblem {
    std::size_t rows = 0; // d + 1
    std::size_t cols = 0;
    std::vector<double> cost;    // cols entries
    std::vector<double> columns; // column-major, cols * rows entries
    std::vector<double> rhs;     // rows entries
    double tol = 1e-9;           // relative feasibility/optimality tolerance

    double entry(std::size_t r, std::size_t j) const { return columns[j * rows + r]; }
};

enum class LpStatus { Optimal, Infeasible, NumericFailure };

struct LpSolution {
    LpStatus status = LpStatus::NumericFailure;
    std::vector<double> lambda; // cols entries, at most rows of them positive
    double objective = 0.0;
    std::vector<double> dual; // rows entries, read as (p, q)
    int iterations = 0;
};

/// Deterministic: identical inputs take identical pivot paths. Infeasible
/// signals rhs outside the cone of the columns (query outside the candidate
/// hull); unboundedness cannot occur for convex-combination columns and is
/// reported as NumericFailure.
LpSolution solveLp(const LpProblem& problem);

const char* statusString(LpStatus status);

} // namespace jetconvex
