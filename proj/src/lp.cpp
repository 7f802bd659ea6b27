// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jetconvex {

namespace {

/// Solves M^T y = c in place by Gaussian elimination with partial pivoting.
/// M is m x m column-major. Returns false on a (numerically) singular basis.
bool solveTransposed(std::vector<double> m, std::size_t n, std::vector<double> c,
                     std::vector<double>& y)
{
    // Row r of M^T is column r of M: M^T(r, k) = m[r * n + k].
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        double bestAbs = std::abs(m[perm[col] * n + col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double a = std::abs(m[perm[r] * n + col]);
            if (a > bestAbs) {
                bestAbs = a;
                best = r;
            }
        }
        if (bestAbs == 0.0)
            return false;
        std::swap(perm[col], perm[best]);
        const double piv = m[perm[col] * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = m[perm[r] * n + col] / piv;
            if (factor == 0.0)
                continue;
            for (std::size_t k = col; k < n; ++k)
                m[perm[r] * n + k] -= factor * m[perm[col] * n + k];
            c[perm[r]] -= factor * c[perm[col]];
        }
    }
    y.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double v = c[perm[i]];
        for (std::size_t k = i + 1; k < n; ++k)
            v -= m[perm[i] * n + k] * y[k];
        y[i] = v / m[perm[i] * n + i];
    }
    return true;
}

} // namespace

LpSolution solveLp(const LpProblem& p)
{
    LpSolution out;
    const std::size_t m = p.rows;
    const std::size_t n = p.cols;
    if (m == 0 || n == 0 || p.cost.size() != n || p.rhs.size() != m ||
        p.columns.size() != n * m)
        return out; // NumericFailure: malformed

    double scale = 1.0;
    for (double v : p.rhs)
        scale = std::max(scale, std::abs(v));
    for (double v : p.cost)
        scale = std::max(scale, std::abs(v));
    const double eps = p.tol * scale;
    const double pivEps = 1e-11 * std::max(1.0, scale);

    // Tableau over the sign-flipped system (rows with negative rhs negated
    // so the artificial basis starts feasible). Width: n original columns,
    // m artificials, then the rhs.
    const std::size_t width = n + m + 1;
    std::vector<double> tab(m * width, 0.0);
    std::vector<double> rowSign(m, 1.0);
    for (std::size_t r = 0; r < m; ++r) {
        const double s = p.rhs[r] < 0.0 ? -1.0 : 1.0;
        rowSign[r] = s;
        for (std::size_t j = 0; j < n; ++j)
            tab[r * width + j] = s * p.entry(r, j);
        tab[r * width + n + r] = 1.0;
        tab[r * width + n + m] = s * p.rhs[r];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r)
        basis[r] = n + r;

    int iterations = 0;
    const int maxIterations = 2000 + 20 * static_cast<int>(n + m);

    auto pivot = [&](std::size_t pr, std::size_t pc) {
        const double piv = tab[pr * width + pc];
        for (std::size_t k = 0; k < width; ++k)
            tab[pr * width + k] /= piv;
        tab[pr * width + pc] = 1.0;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == pr)
                continue;
            const double factor = tab[r * width + pc];
            if (factor == 0.0)
                continue;
            for (std::size_t k = 0; k < width; ++k)
                tab[r * width + k] -= factor * tab[pr * width + k];
            tab[r * width + pc] = 0.0;
        }
        basis[pr] = pc;
    };

    // Runs Bland pivoting for the given per-column costs (artificial columns
    // never enter). Returns false on iteration blow-up or unboundedness.
    auto runPhase = [&](const std::vector<double>& cost) -> bool {
        for (;;) {
            if (++iterations > maxIterations)
                return false;

            std::size_t enter = n;
            for (std::size_t j = 0; j < n; ++j) {
                double red = cost[j];
                for (std::size_t r = 0; r < m; ++r)
                    red -= cost[basis[r]] * tab[r * width + j];
                if (red < -eps) {
                    enter = j;
                    break; // Bland: lowest index
                }
            }
            if (enter == n)
                return true; // optimal for this phase

            double bestRatio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < m; ++r) {
                const double a = tab[r * width + enter];
                if (a > pivEps)
                    bestRatio = std::min(bestRatio, tab[r * width + n + m] / a);
            }
            if (!std::isfinite(bestRatio))
                return false; // unbounded: impossible for well-formed input

            // Bland tie-break: smallest basic-variable index among the rows
            // attaining the minimum ratio.
            const double tieTol = 1e-12 * (1.0 + std::abs(bestRatio));
            std::size_t leave = m;
            for (std::size_t r = 0; r < m; ++r) {
                const double a = tab[r * width + enter];
                if (a <= pivEps)
                    continue;
                if (tab[r * width + n + m] / a <= bestRatio + tieTol &&
                    (leave == m || basis[r] < basis[leave]))
                    leave = r;
            }

            pivot(leave, enter);
        }
    };

    // Phase 1: drive the artificials to zero.
    std::vector<double> phase1Cost(n + m, 0.0);
    for (std::size_t j = n; j < n + m; ++j)
        phase1Cost[j] = 1.0;
    if (!runPhase(phase1Cost)) {
        out.iterations = iterations;
        return out;
    }
    double artificialSum = 0.0;
    for (std::size_t r = 0; r < m; ++r)
        if (basis[r] >= n)
            artificialSum += tab[r * width + n + m];
    if (artificialSum > std::max(eps, pivEps) * static_cast<double>(m)) {
        out.status = LpStatus::Infeasible;
        out.iterations = iterations;
        return out;
    }

    // Pivot leftover zero-level artificials out where possible; a row with
    // no eligible original entry is a dependent constraint and its
    // artificial stays basic at zero.
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(tab[r * width + j]) > pivEps) {
                pivot(r, j);
                break;
            }
        }
    }

    // Phase 2.
    std::vector<double> phase2Cost(n + m, 0.0);
    std::copy(p.cost.begin(), p.cost.end(), phase2Cost.begin());
    if (!runPhase(phase2Cost)) {
        out.iterations = iterations;
        return out;
    }

    out.lambda.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n)
            out.lambda[basis[r]] = std::max(0.0, tab[r * width + n + m]);
    }
    out.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        out.objective += p.cost[j] * out.lambda[j];

    // Dual from the final basis, solved against the original (unflipped)
    // columns; a leftover artificial in row r contributes the unit column
    // rowSign[r] * e_r at cost zero.
    std::vector<double> basisMat(m * m, 0.0), basisCost(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) {
            for (std::size_t k = 0; k < m; ++k)
                basisMat[r * m + k] = p.entry(k, basis[r]);
            basisCost[r] = p.cost[basis[r]];
        } else {
            basisMat[r * m + (basis[r] - n)] = rowSign[basis[r] - n];
        }
    }
    if (!solveTransposed(std::move(basisMat), m, std::move(basisCost), out.dual)) {
        out.iterations = iterations;
        return out;
    }

    out.status = LpStatus::Optimal;
    out.iterations = iterations;
    return out;
}

const char* statusString(LpStatus status)
{
    switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::NumericFailure: return "numeric-failure";
    }
    return "unknown";
}

} // namespace jetconvex
