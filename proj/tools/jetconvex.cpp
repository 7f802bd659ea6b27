// SPDX-License-Identifier: Apache-2.0
//
// jetconvex: decide whether a finite 1-jet admits a convex C1 extension,
// build the extension, evaluate it with certified brackets, and export
// modulus tables and property-check reports.

#include "jetconvex/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

namespace {

std::uint64_t defaultSeed()
{
    if (const char* env = std::getenv("JETCONVEX_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            // fall through to 0
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"convex C1 extension of finite 1-jets"};
    app.require_subcommand(1);

    jetconvex::Tolerances tol;

    // validate
    auto* validate = app.add_subcommand("validate", "check extendability of a jet file");
    std::string valJet;
    validate->add_option("jet", valJet, "jet JSON file")->required();
    validate->add_option("--eps-c", tol.epsC, "allowed negative slack (relative)");
    validate->add_option("--eps-p", tol.epsP, "slack equality threshold (relative)");
    validate->add_option("--eps-g", tol.epsG, "gradient gap threshold (relative)");

    // build
    auto* build = app.add_subcommand("build", "build an extension model from a jet file");
    jetconvex::BuildOptions opts;
    opts.seed = defaultSeed();
    build->add_option("jet", opts.jetPath, "jet JSON file")->required();
    build->add_option("model", opts.modelPath, "output model JSON file")->required();
    build->add_option("--box", opts.box,
                      "evaluation box as lo0,hi0,lo1,hi1,... (default: data box "
                      "inflated 50%, min half-width 1)")
        ->delimiter(',');
    build->add_option("--nodes", opts.nodes, "modulus tangent nodes");
    build->add_option("--tmax", opts.tMax, "modulus horizon (0: auto)");
    build->add_option("--enrichment", opts.enrichment, "extra interior candidates");
    build->add_option("--seed", opts.seed, "random seed (env JETCONVEX_SEED)");
    build->add_flag("--force", opts.force, "build even if validation fails");
    build->add_option("--eps-c", opts.tol.epsC, "allowed negative slack (relative)");
    build->add_option("--eps-p", opts.tol.epsP, "slack equality threshold (relative)");
    build->add_option("--eps-g", opts.tol.epsG, "gradient gap threshold (relative)");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a model at query points");
    std::string evalModel, evalQueries, evalMode = "shared";
    bool evalGrad = false;
    eval->add_option("model", evalModel, "model JSON file")->required();
    eval->add_option("queries", evalQueries, "CSV of query points (one per row)")->required();
    eval->add_option("--mode", evalMode, "shared|refined")->capture_default_str();
    eval->add_flag("--grad", evalGrad, "emit gradient columns");

    // check
    auto* check = app.add_subcommand("check", "run property checks on a model");
    std::string checkModel, suite = "all";
    std::size_t samples = 2000;
    std::uint64_t checkSeed = defaultSeed();
    check->add_option("model", checkModel, "model JSON file")->required();
    check->add_option("--suite", suite,
                      "all|interpolation|gradients|sandwich|convexity|lipschitz|"
                      "second-difference|modulus-chain|modulus-majorization")
        ->capture_default_str();
    check->add_option("--samples", samples, "samples per check")->capture_default_str();
    check->add_option("--seed", checkSeed, "random seed (env JETCONVEX_SEED)");

    // modulus
    auto* modulus = app.add_subcommand("modulus", "export a modulus table as CSV");
    std::string modPath;
    double tMin = 0.0, tMax = 0.0;
    std::size_t steps = 64;
    modulus->add_option("input", modPath, "model or jet JSON file")->required();
    modulus->add_option("--tmin", tMin, "first t value");
    modulus->add_option("--tmax", tMax, "last t value (0: auto)");
    modulus->add_option("--steps", steps, "number of rows")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed())
        return jetconvex::cmdValidate(valJet, tol, std::cout, std::cerr);
    if (build->parsed())
        return jetconvex::cmdBuild(opts, std::cout, std::cerr);
    if (eval->parsed())
        return jetconvex::cmdEval(evalModel, evalQueries, evalMode, evalGrad, std::cout,
                                  std::cerr);
    if (check->parsed())
        return jetconvex::cmdCheck(checkModel, suite, samples, checkSeed, std::cout,
                                   std::cerr);
    if (modulus->parsed())
        return jetconvex::cmdModulus(modPath, tMin, tMax, steps, std::cout, std::cerr);
    return 1;
}
