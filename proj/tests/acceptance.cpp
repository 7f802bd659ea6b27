// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion (A1..A10), nonzero exit when any
// gated criterion fails. Usage: acceptance <cli-binary> <scratch-dir>

#include "jetconvex/commands.hpp"
#include "jetconvex/envelope.hpp"
#include "jetconvex/io.hpp"
#include "jetconvex/minimal.hpp"
#include "jetconvex/rng.hpp"
#include "jetconvex/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace jetconvex;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string id;
    bool passed = true;
    std::string detail;
};

std::vector<Criterion> gResults;
bool gAllPassed = true;

void report(const std::string& id, bool passed, const std::string& detail)
{
    std::cout << id << ": " << (passed ? "PASS" : "FAIL") << " (" << detail << ")\n";
    gResults.push_back({id, passed, detail});
    gAllPassed = gAllPassed && passed;
}

void reportInfo(const std::string& id, const std::string& detail)
{
    std::cout << id << ": REPORT (" << detail << ")\n";
}

std::string fmt(double v)
{
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

struct Fixture {
    std::string name;
    ExtensionModel model;
};

double wallSeconds(const std::chrono::steady_clock::time_point& start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// The 21 acceptance datasets: the parabola jet plus 20 jets sampled from
// smooth convex reference functions, N <= 20, d in {1, 2, 3}.
std::vector<Fixture> buildFixtures()
{
    std::vector<Fixture> fixtures;

    auto assemble = [&](const std::string& name, JetDataset ds, std::size_t enrichment) {
        SlackMatrix slack = computeSlack(ds);
        ModulusModel mod = buildModulus(slack);
        SolverConfig cfg;
        cfg.enrichment = enrichment;
        cfg.seed = 17;
        Box box = defaultDomainBox(ds);
        fixtures.push_back({name, buildExtension(std::move(ds), std::move(slack),
                                                 std::move(mod), std::move(box), cfg)});
    };

    assemble("parabola",
             loadDataset({{{-1.0}, 1.0, {-2.0}}, {{0.0}, 0.0, {0.0}}, {{1.0}, 1.0, {2.0}}}, 1),
             32);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t d = 1 + (seed - 1) % 3;
        const std::size_t n = 5 + (seed * 7) % 16; // 5..20
        ReferenceConvexFunction ref =
            seed % 3 == 0   ? ReferenceConvexFunction::quadraticForm(d, seed)
            : seed % 3 == 1 ? ReferenceConvexFunction::logSumExp(d, 4 + seed % 3, seed)
                            : ReferenceConvexFunction::softplusMaxAffine(d, 4 + seed % 4, seed);
        const JetDataset ds = sampleJet(ref, samplePoints(d, n, 1.2, 1e-2, seed * 13 + 5));
        assemble("ref-" + std::to_string(seed), ds, 24);
    }
    return fixtures;
}

/// Copy of the model with column generation disabled: refined evaluation
/// keeps the query column (so upper <= g) at one LP per query.
ExtensionModel leanCopy(const ExtensionModel& model)
{
    ExtensionModel lean = model;
    lean.config.maxColumns = 0;
    return lean;
}

int runCli(const std::string& cli, const std::string& args, const std::string& outFile)
{
    const std::string cmd = cli + " " + args + " > " + outFile + " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc == -1)
        return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli-binary> <scratch-dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path scratch = argv[2];
    fs::create_directories(scratch);

    const auto suiteStart = std::chrono::steady_clock::now();
    std::vector<Fixture> fixtures = buildFixtures();

    // ----------------------------------------------------------- A1
    {
        const auto start = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const auto& fx : fixtures) {
            const double scale = fx.model.dataset.dataScale();
            for (std::size_t i = 0; i < fx.model.dataset.size(); ++i) {
                const auto& p = fx.model.dataset.point(i);
                const EnvelopeResult res = fx.model.evaluate(p.x, EvalMode::Shared);
                worst = std::max(worst, std::abs(res.upper - p.f) / scale);
            }
        }
        const double secs = wallSeconds(start);
        report("A1 interpolation", worst <= 1e-9 && secs < 5.0,
               "worst=" + fmt(worst) + " <= 1e-9, " + fmt(secs) + "s < 5s");
    }

    // ----------------------------------------------------------- A2
    {
        double worstDual = 0.0, worstFd = 0.0;
        for (const auto& fx : fixtures) {
            const double scale = fx.model.dataset.dataScale();
            for (std::size_t i = 0; i < fx.model.dataset.size(); ++i) {
                const auto& p = fx.model.dataset.point(i);
                const auto est = fx.model.gradientEstimate(p.x);
                double err = 0.0;
                for (std::size_t k = 0; k < est.gradient.size(); ++k) {
                    err += (est.gradient[k] - p.g[k]) * (est.gradient[k] - p.g[k]);
                    worstFd = std::max(worstFd,
                                       std::abs(est.fdGradient[k] - est.gradient[k]) / scale);
                }
                worstDual = std::max(worstDual, std::sqrt(err) / scale);
            }
        }
        report("A2 gradient-match", worstDual <= 1e-4 && worstFd <= 1e-3,
               "dual=" + fmt(worstDual) + " <= 1e-4, fd-gap=" + fmt(worstFd) +
                   " <= 1e-3");
    }

    // ----------------------------------------------------------- A3
    {
        double worst = 0.0;
        for (const auto& fx : fixtures) {
            const ExtensionModel lean = leanCopy(fx.model);
            if (lean.degenerate())
                continue;
            const double scale = lean.dataset.dataScale();
            Rng rng(301);
            for (int s = 0; s < 10000; ++s) {
                const auto x = rng.boxPoint(lean.domainBox.lo, lean.domainBox.hi);
                const EnvelopeResult res = lean.evaluate(x, EvalMode::Refined);
                const double m = lean.minimal(x);
                const double g = lean.upperFunction(x).value;
                worst = std::max(worst,
                                 std::max(m - res.upper, res.upper - g) / scale);
            }
        }
        report("A3 sandwich", worst <= 1e-9, "worst=" + fmt(worst) + " <= 1e-9");
    }

    // ----------------------------------------------------------- A4
    {
        double worst = 0.0;
        for (const auto& fx : fixtures) {
            if (fx.model.degenerate())
                continue;
            const double scale = fx.model.dataset.dataScale();
            const std::size_t d = fx.model.dataset.dim();
            Rng rng(401);
            for (int s = 0; s < 10000; ++s) {
                const auto x = rng.boxPoint(fx.model.domainBox.lo, fx.model.domainBox.hi);
                const auto y = rng.boxPoint(fx.model.domainBox.lo, fx.model.domainBox.hi);
                std::vector<double> mid(d);
                for (std::size_t k = 0; k < d; ++k)
                    mid[k] = 0.5 * (x[k] + y[k]);
                const double ux = fx.model.evaluate(x, EvalMode::Shared).upper;
                const double uy = fx.model.evaluate(y, EvalMode::Shared).upper;
                const double um = fx.model.evaluate(mid, EvalMode::Shared).upper;
                worst = std::max(worst, (um - 0.5 * (ux + uy)) / scale);
            }
        }
        report("A4 convexity", worst <= 1e-9, "worst=" + fmt(worst) + " <= 1e-9");
    }

    // ----------------------------------------------------------- A5
    {
        double worstRatio = 0.0;
        for (const auto& fx : fixtures) {
            if (fx.model.degenerate())
                continue;
            const double bound = 5.0 * fx.model.dataset.gradSupNorm();
            Rng rng(501);
            for (int s = 0; s < 10000; ++s) {
                const auto x = rng.boxPoint(fx.model.domainBox.lo, fx.model.domainBox.hi);
                const auto y = rng.boxPoint(fx.model.domainBox.lo, fx.model.domainBox.hi);
                double dist = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k)
                    dist += (x[k] - y[k]) * (x[k] - y[k]);
                dist = std::sqrt(dist);
                if (dist < 1e-9)
                    continue;
                const double qg = std::abs(fx.model.upperFunction(x).value -
                                           fx.model.upperFunction(y).value) /
                                  dist;
                const double qu = std::abs(fx.model.evaluate(x, EvalMode::Shared).upper -
                                           fx.model.evaluate(y, EvalMode::Shared).upper) /
                                  dist;
                worstRatio = std::max(worstRatio, std::max(qg, qu) / bound);
            }
        }
        report("A5 lipschitz", worstRatio <= 1.0 + 1e-6,
               "worst-ratio=" + fmt(worstRatio) + " <= 1+1e-6");
    }

    // ----------------------------------------------------------- A6
    {
        double worstG = 0.0;
        for (const auto& fx : fixtures) {
            if (fx.model.degenerate())
                continue;
            const CheckReport rep = checkSecondDifference(fx.model, 10000, 601,
                                                          SecondDiffTarget::SmoothedUpper);
            worstG = std::max(worstG, rep.worstViolation);
        }

        const Fixture& parabola = fixtures[0];
        const CheckReport oracleRep = checkSecondDifference(
            parabola.model, 10000, 602, SecondDiffTarget::Oracle1D, 1e-3);

        const CheckReport sharedRep = checkSecondDifference(
            parabola.model, 2000, 603, SecondDiffTarget::SharedEnvelope);
        reportInfo("A6 second-difference (shared, diagnostic)",
                   "worst=" + fmt(sharedRep.worstViolation) + " (not gated)");

        report("A6 second-difference",
               worstG <= 1e-9 && oracleRep.worstViolation <= 10.0 * 1e-3,
               "g-worst=" + fmt(worstG) + " <= 1e-9, oracle-worst=" +
                   fmt(oracleRep.worstViolation) + " <= 1e-2");
    }

    // ----------------------------------------------------------- A7
    {
        const Fixture& parabola = fixtures[0];
        const JetDataset& ds = parabola.model.dataset;
        const SlackMatrix& slack = parabola.model.slack;
        const PairTerms terms = extractPairTerms(slack);

        double closedVsProbe = 0.0;
        for (double t : {0.5, 1.0, 2.0, 4.0}) {
            const double closed = rawModulus(terms, t);
            const double probe = rawModulusProbe(ds, t, 1e-3);
            closedVsProbe = std::max(closedVsProbe, std::abs(closed - probe));
        }

        double envErr = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double t = 0.04 + 0.08 * i;
            const double hand = t <= 2.0 ? t : 4.0 - 4.0 / t;
            envErr = std::max(envErr, std::abs(exactEnvelope(terms, t).value - hand));
        }

        // representation checks at zero tolerance
        const ModulusModel& mod = parabola.model.modulus;
        bool shapeOk = !mod.degenerate;
        for (std::size_t k = 0; k + 1 < mod.slopes.size(); ++k)
            shapeOk = shapeOk && mod.slopes[k] > mod.slopes[k + 1] &&
                      mod.intercepts[k] < mod.intercepts[k + 1];
        for (std::size_t k = 0; k + 1 < mod.knots.size(); ++k)
            shapeOk = shapeOk && mod.knots[k] < mod.knots[k + 1];

        const CheckReport major = checkModulusMajorization(parabola.model, 10000, 701);
        const CheckReport chain = checkModulusChain(parabola.model, 10000, 702);

        report("A7 modulus-pipeline",
               closedVsProbe <= 1e-2 && envErr <= 1e-8 && shapeOk && major.passed &&
                   chain.passed,
               "probe-gap=" + fmt(closedVsProbe) + " <= 1e-2, env-err=" + fmt(envErr) +
                   " <= 1e-8, chain-worst=" + fmt(chain.worstViolation));
    }

    // ----------------------------------------------------------- A8
    {
        JetDataset ds = fixtures[0].model.dataset;
        SlackMatrix slack = computeSlack(ds);
        ModulusModel mod = buildModulus(slack);
        SolverConfig cfg;
        cfg.enrichment = 64;
        cfg.seed = 17;
        const ExtensionModel rich = buildExtension(ds, slack, mod, defaultDomainBox(ds), cfg);
        const Envelope1D oracle = envelope1DOracle(rich, 1e-3);

        double worstGap = 0.0, worstRefine = 0.0;
        Rng rng(801);
        for (int s = 0; s < 200; ++s) {
            const std::vector<double> x{rng.uniform(rich.domainBox.lo[0],
                                                    rich.domainBox.hi[0])};
            const double shared = rich.evaluate(x, EvalMode::Shared).upper;
            const double refined = rich.evaluate(x, EvalMode::Refined).upper;
            worstGap = std::max(worstGap, std::abs(shared - oracle.eval(x[0])));
            worstRefine = std::max(worstRefine, refined - shared);
        }
        report("A8 oracle-equivalence", worstGap <= 5e-3 && worstRefine <= 1e-10,
               "shared-vs-oracle=" + fmt(worstGap) + " <= 5e-3, refined-excess=" +
                   fmt(worstRefine));
    }

    // ----------------------------------------------------------- A9
    {
        bool allValid = true;
        for (const auto& fx : fixtures)
            allValid = allValid && validate(fx.model.slack, {}).status == JetStatus::Valid;

        const std::string cJet = (scratch / "violates-c.json").string();
        writeJetFile(cJet, 1, {{{0.0}, 0.0, {1.0}}, {{1.0}, 0.0, {0.0}}});
        const std::string cwJet = (scratch / "violates-cw1.json").string();
        writeJetFile(cwJet, 1, {{{0.0}, 0.0, {1.0}}, {{1.0}, 1.0, {2.0}}});

        const std::string outC = (scratch / "out-c.json").string();
        const std::string outCw = (scratch / "out-cw.json").string();
        const int rcC = runCli(cli, "validate " + cJet, outC);
        const int rcCw = runCli(cli, "validate " + cwJet, outCw);

        const std::string bodyC = slurp(outC);
        const std::string bodyCw = slurp(outCw);
        const bool pairC = bodyC.find("\"kind\": \"C\"") != std::string::npos &&
                           bodyC.find("\"i\": 1") != std::string::npos &&
                           bodyC.find("\"j\": 0") != std::string::npos;
        const bool pairCw = bodyCw.find("\"kind\": \"CW1\"") != std::string::npos &&
                            bodyCw.find("\"i\": 1") != std::string::npos &&
                            bodyCw.find("\"j\": 0") != std::string::npos;

        report("A9 validator", allValid && rcC == 2 && rcCw == 3 && pairC && pairCw,
               std::string("reference jets valid=") + (allValid ? "yes" : "no") +
                   ", exit-codes=" + std::to_string(rcC) + "/" + std::to_string(rcCw) +
                   ", pairs-reported=" + (pairC && pairCw ? "yes" : "no"));
    }

    // ----------------------------------------------------------- A10
    {
        const std::string jet = (scratch / "parabola.json").string();
        writeJetFile(jet, 1,
                     {{{-1.0}, 1.0, {-2.0}}, {{0.0}, 0.0, {0.0}}, {{1.0}, 1.0, {2.0}}});
        const std::string queries = (scratch / "queries.csv").string();
        {
            std::ofstream q(queries);
            Rng rng(1001);
            for (int i = 0; i < 50; ++i)
                q << rng.uniform(-1.5, 1.5) << "\n";
        }

        const std::string m1 = (scratch / "m1.json").string();
        const std::string m2 = (scratch / "m2.json").string();
        const std::string build = " --enrichment 16 --seed 9 ";
        bool ok = runCli(cli, "build " + jet + " " + m1 + build,
                         (scratch / "b1.txt").string()) == 0;
        ok = ok && runCli(cli, "build " + jet + " " + m2 + build,
                          (scratch / "b2.txt").string()) == 0;
        ok = ok && slurp(m1) == slurp(m2) && !slurp(m1).empty();

        const std::string e1 = (scratch / "e1.csv").string();
        const std::string e2 = (scratch / "e2.csv").string();
        const std::string e3 = (scratch / "e3.csv").string();
        ok = ok && runCli(cli, "eval " + m1 + " " + queries + " --mode shared --grad", e1) == 0;
        ok = ok && runCli(cli, "eval " + m1 + " " + queries + " --mode shared --grad", e2) == 0;
        ok = ok && runCli(cli, "eval " + m2 + " " + queries + " --mode shared --grad", e3) == 0;
        ok = ok && slurp(e1) == slurp(e2) && slurp(e1) == slurp(e3) && !slurp(e1).empty();

        const std::string r1 = (scratch / "r1.csv").string();
        const std::string r2 = (scratch / "r2.csv").string();
        ok = ok && runCli(cli, "eval " + m1 + " " + queries + " --mode refined", r1) == 0;
        ok = ok && runCli(cli, "eval " + m1 + " " + queries + " --mode refined", r2) == 0;
        ok = ok && slurp(r1) == slurp(r2) && !slurp(r1).empty();

        const double total = wallSeconds(suiteStart);
        report("A10 determinism", ok && total < 60.0,
               std::string("byte-identical=") + (ok ? "yes" : "no") + ", suite=" +
                   fmt(total) + "s < 60s");
    }

    std::cout << (gAllPassed ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES") << "\n";
    return gAllPassed ? 0 : 1;
}
