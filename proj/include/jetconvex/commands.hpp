// SPDX-License-Identifier: Apache-2.0
//
// Subcommand implementations behind the CLI. Exit-code contract:
//   0  success / jet valid
//   1  I/O or format error
//   2  jet violates the convexity inequality (C)
//   3  jet violates the gradient-coincidence rule (CW1)

#pragma once

#include "jetconvex/jet.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace jetconvex {

struct BuildOptions {
    std::string jetPath;
    std::string modelPath;
    std::vector<double> box; // flat lo0,hi0,lo1,hi1,...; empty: default box
    std::size_t nodes = 32;
    double tMax = 0.0;
    std::size_t enrichment = 16;
    std::uint64_t seed = 0;
    bool force = false;
    Tolerances tol;
};

int cmdValidate(const std::string& jetPath, const Tolerances& tol, std::ostream& out,
                std::ostream& err);

int cmdBuild(const BuildOptions& opts, std::ostream& out, std::ostream& err);

int cmdEval(const std::string& modelPath, const std::string& queriesPath,
            const std::string& mode, bool withGrad, std::ostream& out,
            std::ostream& err);

int cmdCheck(const std::string& modelPath, const std::string& suite,
             std::size_t samples, std::uint64_t seed, std::ostream& out,
             std::ostream& err);

int cmdModulus(const std::string& path, double tMin, double tMax, std::size_t steps,
               std::ostream& out, std::ostream& err);

} // namespace jetconvex
