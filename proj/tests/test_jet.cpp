// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

#include "jetconvex/jet.hpp"
#include "jetconvex/rng.hpp"
#include "jetconvex/verify.hpp"
#include "test_data.hpp"

#include <cmath>
#include <limits>

using namespace jetconvex;

TEST_CASE("loadDataset: single point")
{
    const JetDataset ds = loadDataset({{{0.0}, 3.0, {2.0}}}, 1);
    CHECK(ds.size() == 1);
    CHECK(ds.gradSupNorm() == 2.0);
    CHECK(ds.gradDiameter() == 0.0);
    CHECK(ds.dataScale() == 3.0); // max(1, |f|=3, diam=0, |g|=2)
}

TEST_CASE("loadDataset: exact duplicates merge")
{
    const JetDataset ds = loadDataset({{{1.0, 2.0}, 3.0, {0.5, 0.5}},
                                       {{1.0, 2.0}, 3.0, {0.5, 0.5}}},
                                      2);
    CHECK(ds.size() == 1);
}

TEST_CASE("loadDataset: parabola derived fields")
{
    const JetDataset ds = testdata::parabolaJet();
    CHECK(ds.size() == 3);
    CHECK(ds.gradSupNorm() == 2.0);
    CHECK(ds.gradDiameter() == 4.0);
    CHECK(ds.dataScale() == 2.0); // point diameter 2 = max term
}

TEST_CASE("loadDataset: errors")
{
    CHECK_THROWS_AS(loadDataset({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(loadDataset({{{1.0, 2.0}, 0.0, {1.0}}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(loadDataset({{{1.0}, std::nan(""), {1.0}}}, 1), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(loadDataset({{{inf}, 0.0, {1.0}}}, 1), std::invalid_argument);
    // same point, conflicting jet
    CHECK_THROWS_AS(loadDataset({{{0.0}, 0.0, {1.0}}, {{0.0}, 1.0, {1.0}}}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(loadDataset({{{0.0}, 0.0, {1.0}}, {{0.0}, 0.0, {2.0}}}, 1),
                    std::invalid_argument);
}

TEST_CASE("computeSlack: parabola matrices")
{
    const SlackMatrix s = computeSlack(testdata::parabolaJet());
    REQUIRE(s.n == 3);
    const double P[3][3] = {{0, 1, 4}, {1, 0, 1}, {4, 1, 0}};
    const double B[3][3] = {{0, 2, 4}, {2, 0, 2}, {4, 2, 0}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK_CLOSE(s.P(i, j), P[i][j], 1e-14);
            CHECK_CLOSE(s.b(i, j), B[i][j], 1e-14);
        }
    }
    CHECK(s.P(0, 0) == 0.0);
    CHECK(s.b(2, 2) == 0.0);
}

TEST_CASE("computeSlack: affine jet has zero slack and gap")
{
    const SlackMatrix s = computeSlack(testdata::affineJet());
    for (std::size_t i = 0; i < s.n; ++i) {
        for (std::size_t j = 0; j < s.n; ++j) {
            CHECK(std::abs(s.P(i, j)) <= 1e-14);
            CHECK(s.b(i, j) == 0.0);
        }
    }
}

TEST_CASE("computeSlack: forced negative slack")
{
    const SlackMatrix s = computeSlack(testdata::violatesC());
    CHECK_CLOSE(s.P(1, 0), -1.0, 1e-15);
}

TEST_CASE("validate: parabola is valid, worst off-diagonal slack is 1")
{
    const ValidationReport rep = validate(computeSlack(testdata::parabolaJet()), {});
    CHECK(rep.status == JetStatus::Valid);
    CHECK(rep.violations.empty());
    CHECK_CLOSE(rep.worstCSlack, 1.0, 1e-15);
}

TEST_CASE("validate: equality with distinct gradients flags CW1")
{
    const ValidationReport rep = validate(computeSlack(testdata::violatesCW1()), {});
    REQUIRE(rep.status == JetStatus::ViolatesCW1);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].kind == Violation::Kind::CW1);
    CHECK(rep.violations[0].i == 1);
    CHECK(rep.violations[0].j == 0);
    CHECK_CLOSE(rep.violations[0].magnitude, 1.0, 1e-15);
}

TEST_CASE("validate: negative slack flags C with the pair and magnitude")
{
    // This jet also has a zero-slack pair with distinct gradients in the
    // other ordering; the C violation decides the status.
    const ValidationReport rep = validate(computeSlack(testdata::violatesC()), {});
    REQUIRE(rep.status == JetStatus::ViolatesC);
    bool found = false;
    for (const auto& v : rep.violations) {
        if (v.kind == Violation::Kind::C) {
            CHECK(v.i == 1);
            CHECK(v.j == 0);
            CHECK_CLOSE(v.magnitude, -1.0, 1e-15);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("validate: rejects ill-formed tolerances")
{
    const SlackMatrix s = computeSlack(testdata::parabolaJet());
    Tolerances bad;
    bad.epsP = 0.0;
    CHECK_THROWS_AS(validate(s, bad), std::invalid_argument);
    bad = {};
    bad.epsG = -1.0;
    CHECK_THROWS_AS(validate(s, bad), std::invalid_argument);
    bad = {};
    bad.epsC = -1e-3;
    CHECK_THROWS_AS(validate(s, bad), std::invalid_argument);
}

TEST_CASE("property: gradient diameter never exceeds twice the sup norm")
{
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 1 + rng.index(3);
        const std::size_t n = 2 + rng.index(6);
        std::vector<JetPoint> recs;
        for (std::size_t i = 0; i < n; ++i) {
            JetPoint p;
            for (std::size_t k = 0; k < d; ++k) {
                p.x.push_back(rng.uniform(-2.0, 2.0));
                p.g.push_back(rng.uniform(-3.0, 3.0));
            }
            recs.push_back(std::move(p));
        }
        const JetDataset ds = loadDataset(recs, d);
        CHECK(ds.gradDiameter() <= 2.0 * ds.gradSupNorm() + 1e-12);
    }
}

TEST_CASE("validate: single point")
{
    const ValidationReport rep =
        validate(computeSlack(loadDataset({{{0.0}, 1.0, {1.0}}}, 1)), {});
    CHECK(rep.status == JetStatus::Valid);
    CHECK(std::isinf(rep.worstCSlack));
    CHECK(std::isinf(rep.cw1Margin));
}

TEST_CASE("property: P(i,j) + P(j,i) equals the gradient-point pairing")
{
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = 1 + rng.index(3);
        const std::size_t n = 2 + rng.index(8);
        std::vector<JetPoint> recs;
        for (std::size_t i = 0; i < n; ++i) {
            JetPoint p;
            for (std::size_t k = 0; k < d; ++k) {
                p.x.push_back(rng.uniform(-2.0, 2.0));
                p.g.push_back(rng.uniform(-3.0, 3.0));
            }
            p.f = rng.uniform(-2.0, 2.0);
            recs.push_back(std::move(p));
        }
        const JetDataset ds = loadDataset(recs, d);
        const SlackMatrix s = computeSlack(ds);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double pairing = 0.0;
                for (std::size_t k = 0; k < d; ++k)
                    pairing += (ds.point(i).g[k] - ds.point(j).g[k]) *
                               (ds.point(i).x[k] - ds.point(j).x[k]);
                CHECK_CLOSE(s.P(i, j) + s.P(j, i), pairing, 1e-12 * ds.dataScale());
            }
        }
    }
}

TEST_CASE("property: scaling f and g scales P and b, validity unchanged")
{
    const ReferenceConvexFunction ref = ReferenceConvexFunction::logSumExp(2, 4, 5);
    const auto pts = samplePoints(2, 8, 1.2, 1e-3, 13);
    const JetDataset base = sampleJet(ref, pts);
    const SlackMatrix s0 = computeSlack(base);
    const ValidationReport r0 = validate(s0, {});

    const double lambda = 37.5;
    std::vector<JetPoint> scaled;
    for (const auto& p : base.points()) {
        JetPoint q = p;
        q.f *= lambda;
        for (auto& c : q.g)
            c *= lambda;
        scaled.push_back(std::move(q));
    }
    const JetDataset dsScaled = loadDataset(scaled, 2);
    const SlackMatrix s1 = computeSlack(dsScaled);
    const ValidationReport r1 = validate(s1, {});

    CHECK(r0.status == r1.status);
    for (std::size_t i = 0; i < s0.n; ++i) {
        for (std::size_t j = 0; j < s0.n; ++j) {
            CHECK_CLOSE(s1.P(i, j), lambda * s0.P(i, j), 1e-10);
            CHECK_CLOSE(s1.b(i, j), lambda * s0.b(i, j), 1e-10);
        }
    }
}

TEST_CASE("smoothed max-affine jets report strictly positive equality margins")
{
    // strict convexity keeps every off-diagonal slack away from zero, so no
    // pair is flagged as an equality and the margin stays at +infinity
    const ReferenceConvexFunction ref = ReferenceConvexFunction::softplusMaxAffine(2, 5, 3);
    const JetDataset ds = sampleJet(ref, samplePoints(2, 8, 1.2, 5e-2, 9));
    const ValidationReport rep = validate(computeSlack(ds), {});
    CHECK(rep.status == JetStatus::Valid);
    CHECK(rep.cw1Margin > 0.0);
    CHECK(rep.worstCSlack > 0.0);
}

TEST_CASE("property: jets sampled from smooth convex functions validate at epsC = 0")
{
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const std::size_t d = 1 + seed % 3;
        ReferenceConvexFunction ref =
            seed % 3 == 0   ? ReferenceConvexFunction::quadraticForm(d, seed)
            : seed % 3 == 1 ? ReferenceConvexFunction::logSumExp(d, 4, seed)
                            : ReferenceConvexFunction::softplusMaxAffine(d, 5, seed);
        const auto pts = samplePoints(d, 10, 1.5, 1e-3, seed * 17 + 1);
        const JetDataset ds = sampleJet(ref, pts);
        const ValidationReport rep = validate(computeSlack(ds), {});
        CAPTURE(seed);
        CHECK(rep.status == JetStatus::Valid);
    }
}
