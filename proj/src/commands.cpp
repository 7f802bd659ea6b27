// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/commands.hpp"

#include "jetconvex/io.hpp"
#include "jetconvex/numfmt.hpp"
#include "jetconvex/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace jetconvex {

using ordered_json = nlohmann::ordered_json;

namespace {

int exitCodeFor(JetStatus status)
{
    switch (status) {
    case JetStatus::Valid: return 0;
    case JetStatus::ViolatesC: return 2;
    case JetStatus::ViolatesCW1: return 3;
    }
    return 1;
}

ordered_json reportJson(const ValidationReport& rep, const JetDataset& ds)
{
    ordered_json doc;
    doc["status"] = statusString(rep.status);
    doc["dim"] = ds.dim();
    doc["n"] = ds.size();
    doc["dataScale"] = ds.dataScale();
    doc["worstCSlack"] =
        std::isfinite(rep.worstCSlack) ? ordered_json(rep.worstCSlack) : ordered_json(nullptr);
    doc["cw1Margin"] =
        std::isfinite(rep.cw1Margin) ? ordered_json(rep.cw1Margin) : ordered_json(nullptr);
    ordered_json viols = ordered_json::array();
    for (const auto& v : rep.violations) {
        ordered_json rec;
        rec["kind"] = v.kind == Violation::Kind::C ? "C" : "CW1";
        rec["i"] = v.i;
        rec["j"] = v.j;
        rec["magnitude"] = v.magnitude;
        viols.push_back(std::move(rec));
    }
    doc["violations"] = std::move(viols);
    return doc;
}

} // namespace

int cmdValidate(const std::string& jetPath, const Tolerances& tol, std::ostream& out,
                std::ostream& err)
{
    try {
        const JetFile file = readJetFile(jetPath);
        const JetDataset ds = loadDataset(file.records, file.dim);
        const ValidationReport rep = validate(computeSlack(ds), tol);
        out << reportJson(rep, ds).dump(1) << "\n";
        return exitCodeFor(rep.status);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmdBuild(const BuildOptions& opts, std::ostream& out, std::ostream& err)
{
    try {
        const JetFile file = readJetFile(opts.jetPath);
        JetDataset ds = loadDataset(file.records, file.dim);
        SlackMatrix slack = computeSlack(ds);
        const ValidationReport rep = validate(slack, opts.tol);
        if (rep.status != JetStatus::Valid && !opts.force) {
            err << "error: jet fails validation (" << statusString(rep.status)
                << "); rerun with --force to build anyway\n";
            return exitCodeFor(rep.status);
        }

        Box box;
        if (opts.box.empty()) {
            box = defaultDomainBox(ds);
        } else {
            if (opts.box.size() != 2 * ds.dim())
                throw std::runtime_error("--box needs 2*dim comma-separated numbers "
                                         "(lo0,hi0,lo1,hi1,...)");
            for (std::size_t k = 0; k < ds.dim(); ++k) {
                box.lo.push_back(opts.box[2 * k]);
                box.hi.push_back(opts.box[2 * k + 1]);
                if (!(box.lo[k] < box.hi[k]))
                    throw std::runtime_error("--box axis " + std::to_string(k) +
                                             " is empty");
            }
        }

        ModulusModel modulus = buildModulus(slack, opts.nodes, opts.tMax, opts.tol);

        SolverConfig config;
        config.enrichment = opts.enrichment;
        config.seed = opts.seed;
        config.nodes = opts.nodes;
        config.tMax = opts.tMax;
        config.forcedBuild = rep.status != JetStatus::Valid;

        const ExtensionModel model = buildExtension(std::move(ds), std::move(slack),
                                                    std::move(modulus), std::move(box),
                                                    config);
        saveModel(model, opts.modelPath);

        ordered_json summary;
        summary["model"] = opts.modelPath;
        summary["n"] = model.dataset.size();
        summary["dim"] = model.dataset.dim();
        summary["candidates"] = model.candidates.size();
        summary["degenerate"] = model.degenerate();
        summary["forced"] = model.config.forcedBuild;
        out << summary.dump(1) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmdEval(const std::string& modelPath, const std::string& queriesPath,
            const std::string& mode, bool withGrad, std::ostream& out,
            std::ostream& err)
{
    try {
        EvalMode evalMode;
        if (mode == "shared")
            evalMode = EvalMode::Shared;
        else if (mode == "refined")
            evalMode = EvalMode::Refined;
        else
            throw std::runtime_error("unknown mode '" + mode + "' (shared|refined)");

        const ExtensionModel model = loadModel(modelPath);
        const std::size_t d = model.dataset.dim();
        const auto queries = readQueriesCsv(queriesPath, d);

        for (std::size_t k = 0; k < d; ++k)
            out << "x" << k << ",";
        out << "lower,upper";
        if (withGrad)
            for (std::size_t k = 0; k < d; ++k)
                out << ",grad" << k;
        out << ",status\n";

        for (const auto& q : queries) {
            const EnvelopeResult res = model.evaluate(q, evalMode);
            for (std::size_t k = 0; k < d; ++k)
                out << formatDouble(q[k]) << ",";
            const bool hasValues = res.status == EvalStatus::Ok ||
                                   res.status == EvalStatus::DegenerateAffine;
            if (hasValues)
                out << formatDouble(res.lower) << "," << formatDouble(res.upper);
            else
                out << ",";
            if (withGrad) {
                for (std::size_t k = 0; k < d; ++k) {
                    out << ",";
                    if (hasValues && res.gradient.size() == d)
                        out << formatDouble(res.gradient[k]);
                }
            }
            out << "," << statusString(res.status) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmdCheck(const std::string& modelPath, const std::string& suite,
             std::size_t samples, std::uint64_t seed, std::ostream& out,
             std::ostream& err)
{
    try {
        const ExtensionModel model = loadModel(modelPath);
        std::vector<CheckReport> reports;

        const bool all = suite == "all";
        auto wants = [&](const char* name) { return all || suite == name; };
        bool known = all;

        if (wants("interpolation")) {
            reports.push_back(checkInterpolation(model));
            known = true;
        }
        if (wants("gradients")) {
            reports.push_back(checkGradients(model));
            known = true;
        }
        if (wants("sandwich")) {
            reports.push_back(checkSandwich(model, samples, seed));
            known = true;
        }
        if (wants("convexity")) {
            reports.push_back(checkConvexity(model, samples, seed));
            known = true;
        }
        if (wants("lipschitz")) {
            reports.push_back(checkLipschitz(model, samples, seed));
            known = true;
        }
        if (wants("second-difference")) {
            reports.push_back(
                checkSecondDifference(model, samples, seed, SecondDiffTarget::SmoothedUpper));
            if (model.dataset.dim() == 1)
                reports.push_back(
                    checkSecondDifference(model, samples, seed, SecondDiffTarget::Oracle1D));
            reports.push_back(
                checkSecondDifference(model, samples, seed, SecondDiffTarget::SharedEnvelope));
            known = true;
        }
        if (wants("modulus-chain")) {
            reports.push_back(checkModulusChain(model, samples, seed));
            known = true;
        }
        if (wants("modulus-majorization")) {
            reports.push_back(checkModulusMajorization(model, samples, seed));
            known = true;
        }
        if (!known) {
            err << "error: unknown suite '" << suite << "'\n";
            return 1;
        }

        ordered_json arr = ordered_json::array();
        bool ok = true;
        for (const auto& rep : reports) {
            ordered_json doc;
            doc["name"] = rep.name;
            doc["samples"] = rep.samples;
            doc["worst"] = rep.worstViolation;
            doc["threshold"] = rep.threshold;
            doc["passed"] = rep.passed;
            doc["gating"] = rep.gating;
            arr.push_back(std::move(doc));
            if (rep.gating && !rep.passed)
                ok = false;
        }
        out << arr.dump(1) << "\n";
        return ok ? 0 : 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmdModulus(const std::string& path, double tMin, double tMax, std::size_t steps,
               std::ostream& out, std::ostream& err)
{
    try {
        if (steps == 0)
            throw std::runtime_error("--steps must be >= 1");

        SlackMatrix slack;
        ModulusModel modulus;
        Tolerances tol;
        if (isModelFile(path)) {
            const ExtensionModel model = loadModel(path);
            slack = model.slack;
            modulus = model.modulus;
        } else {
            const JetFile file = readJetFile(path);
            const JetDataset ds = loadDataset(file.records, file.dim);
            slack = computeSlack(ds);
            const ValidationReport rep = validate(slack, tol);
            if (rep.status != JetStatus::Valid) {
                err << "error: jet fails validation (" << statusString(rep.status) << ")\n";
                return exitCodeFor(rep.status);
            }
            modulus = buildModulus(slack, 32, 0.0, tol);
        }

        const PairTerms terms = extractPairTerms(slack, tol);
        if (tMax <= 0.0)
            tMax = terms.maxKnee > 0.0 ? 8.0 * terms.maxKnee : 1.0;
        if (tMin < 0.0)
            throw std::runtime_error("--tmin must be >= 0");
        if (tMin == 0.0 && steps > 1)
            tMin = tMax / 256.0;

        out << "t,omega0,envelope,omegahat,phihat\n";
        for (std::size_t i = 0; i < steps; ++i) {
            const double t = steps == 1
                                 ? tMin
                                 : tMin + (tMax - tMin) * static_cast<double>(i) /
                                              static_cast<double>(steps - 1);
            const double raw = t > 0.0 ? rawModulus(terms, t) : 0.0;
            const double env = exactEnvelope(terms, t).value;
            out << formatDouble(t) << "," << formatDouble(raw) << ","
                << formatDouble(env) << "," << formatDouble(modulus.value(t)) << ","
                << formatDouble(modulus.integral(t)) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace jetconvex
