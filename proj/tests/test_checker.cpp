#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tgeom/checker.hpp"

using namespace tgeom;
using tgeom::testkit::Gen;

namespace {

/// Tabulated copy of five Euclidean points in the plane.
Geometry five_point_plane() {
    const std::vector<LabeledPoint> pts{
        {"A", {0, 0}}, {"B", {1, 0}}, {"C", {0, 1}}, {"D", {1, 1}}, {"E", {0.5, 0.25}}};
    const auto e2 = Geometry::euclidean(2);
    std::vector<SigmaSample> s;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            s.push_back({pts[i].id, pts[j].id, e2.sigma(pts[i].point, pts[j].point)});
    return load_tabulated(pts, s);
}

const Skeleton kMinkFrame{{0, 0, 0, 0}, {2, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};

} // namespace

TEST(ConditionNames, RoundTrip) {
    for (int i = 0; i <= static_cast<int>(ConditionId::degeneracy_probe); ++i) {
        const auto id = static_cast<ConditionId>(i);
        EXPECT_EQ(parse_condition_id(to_string(id)), id);
    }
    EXPECT_EQ(parse_condition_id("IV"), ConditionId::positive_eigenvalues);
    EXPECT_EQ(parse_condition_id("V"), ConditionId::continuity);
    EXPECT_FALSE(parse_condition_id("VI"));
    EXPECT_EQ(parse_verdict("inconclusive"), Verdict::inconclusive);
    EXPECT_FALSE(parse_verdict("maybe"));
}

TEST(Symmetry, PassesForAnalyticGeometries) {
    Gen gen(31);
    const auto sample = gen.cloud(12, 4);
    for (const auto& g : {Geometry::euclidean(4), Geometry::minkowski(4), Geometry::distorted(4, 1, 0.01, 0.1)})
        EXPECT_EQ(check_symmetry(g, sample).verdict, Verdict::pass);
}

TEST(Symmetry, FailsForAsymmetricTable) {
    const auto g = Geometry::tabulated_unchecked({{0.0}, {1.0}}, {0.0, 0.5, 0.6, 0.0});
    const auto rep = check_symmetry(g, g.carrier());
    EXPECT_EQ(rep.verdict, Verdict::fail);
    EXPECT_NEAR(rep.residual_max, 0.1, 1e-12);
    EXPECT_FALSE(rep.evidence.empty());
}

TEST(Dimension, EuclideanSpaceDimension) {
    Gen gen(32);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto rep = estimate_dimension(Geometry::euclidean(n), gen.cloud(12, n), 1e-9, 8, 5);
        EXPECT_EQ(rep.verdict, Verdict::pass) << n;
        EXPECT_EQ(rep.estimated_dimension, static_cast<int>(n));
    }
}

TEST(Dimension, PlanarCloudInSpaceIsTwoDimensional) {
    Gen gen(33);
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({gen.uniform(-1, 1), gen.uniform(-1, 1), 0.0});
    const auto rep = estimate_dimension(Geometry::euclidean(3), pts, 1e-9, 8, 1);
    EXPECT_EQ(rep.verdict, Verdict::pass);
    EXPECT_EQ(rep.estimated_dimension, 2);
}

TEST(Dimension, SmallSampleInconclusive) {
    Gen gen(34);
    const auto rep = estimate_dimension(Geometry::euclidean(3), gen.cloud(5, 3));
    EXPECT_EQ(rep.verdict, Verdict::inconclusive);
}

TEST(LinearStructure, EuclideanPasses) {
    Gen gen(35);
    const auto g = Geometry::euclidean(3);
    const auto rep = check_linear_structure(g, Skeleton(gen.cloud(4, 3)), gen.cloud(15, 3, 2.0));
    EXPECT_EQ(rep.verdict, Verdict::pass);
    EXPECT_LT(rep.residual_max, 1e-10);
}

TEST(LinearStructure, MinkowskiPasses) {
    Gen gen(36);
    const auto rep = check_linear_structure(Geometry::minkowski(4), kMinkFrame, gen.cloud(15, 4));
    EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(LinearStructure, DistortedFailsWithResidualOfOrderD) {
    Gen gen(37);
    for (double d : {0.01, 0.001}) {
        const auto rep = check_linear_structure(Geometry::distorted(4, 1, d, 0.1), kMinkFrame, gen.cloud(15, 4));
        EXPECT_EQ(rep.verdict, Verdict::fail);
        EXPECT_GT(rep.residual_max, 0.1 * d);
        EXPECT_LT(rep.residual_max, 20.0 * d);
    }
}

TEST(Eigenvalues, SignatureDecides) {
    EXPECT_EQ(check_eigenvalues(Geometry::euclidean(2), Skeleton{{0, 0}, {1, 0}, {0, 1}}).verdict, Verdict::pass);
    const auto rep = check_eigenvalues(Geometry::minkowski(4), kMinkFrame);
    EXPECT_EQ(rep.verdict, Verdict::fail);
    EXPECT_NEAR(rep.residual_max, 1.0, 1e-12);
}

TEST(Continuity, EuclideanUniqueSolution) {
    Gen gen(38);
    const auto g = Geometry::euclidean(2);
    const Skeleton frame{{0, 0}, {1, 0}, {0, 1}};
    std::vector<std::vector<double>> targets;
    for (int i = 0; i < 4; ++i) targets.push_back(covariant_coordinates(g, frame, gen.point(2, 0.8)));
    const auto rep = check_continuity(g, frame, targets, Box::cube(2, -1.5, 1.5), 1e-9, {.starts = 8, .seed = 3});
    EXPECT_EQ(rep.verdict, Verdict::pass);
    EXPECT_EQ(rep.solution_count, 1);
    EXPECT_EQ(rep.note, "bounded-domain");
}

TEST(Continuity, FiniteCarrierMissesGenericTargets) {
    const auto g = five_point_plane();
    const Skeleton frame{{0, 0}, {1, 0}, {0, 1}};
    const auto rep = check_continuity(g, frame, {{0.3, 0.7}}, Box::cube(2, -1, 2));
    EXPECT_EQ(rep.verdict, Verdict::fail);
    EXPECT_EQ(rep.solution_count, 0);
}

TEST(Continuity, FiniteCarrierHitsItsOwnPoints) {
    const auto g = five_point_plane();
    const Skeleton frame{{0, 0}, {1, 0}, {0, 1}};
    const auto rep = check_continuity(g, frame, {{1, 1}, {0.5, 0.25}}, Box::cube(2, -1, 2));
    EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(MetricAxioms, EuclideanPassesMinkowskiFails) {
    Gen gen(39);
    const auto sample = gen.cloud(10, 4);
    const auto e = check_metric_axioms(Geometry::euclidean(4), sample);
    EXPECT_EQ(e.positivity.verdict, Verdict::pass);
    EXPECT_EQ(e.triangle.verdict, Verdict::pass);
    const auto m = check_metric_axioms(Geometry::minkowski(4), sample);
    EXPECT_EQ(m.positivity.verdict, Verdict::fail);
}

TEST(MetricAxioms, TabulatedTriangleViolation) {
    // rho(A,B) = rho(B,C) = 1, rho(A,C) = 3
    const auto g = load_tabulated({{"A", {0}}, {"B", {1}}, {"C", {2}}},
                                  {{"A", "B", 0.5}, {"B", "C", 0.5}, {"A", "C", 4.5}});
    const auto rep = check_metric_axioms(g, g.carrier());
    EXPECT_EQ(rep.triangle.verdict, Verdict::fail);
    EXPECT_NEAR(rep.triangle.residual_max, 1.0, 1e-12);
}

TEST(DegenerateEllipsoid, EuclideanHasNoInteriorPoints) {
    Gen gen(40);
    const auto rep = check_degenerate_ellipsoid(Geometry::euclidean(3), {0, 0, 0}, {1, 0, 0}, gen.cloud(200, 3));
    EXPECT_EQ(rep.verdict, Verdict::pass);
}

TEST(DegenerateEllipsoid, MinkowskiTimelikeHasInteriorPoints) {
    // Reverse triangle inequality: a broken timelike path is shorter.
    const auto rep = check_degenerate_ellipsoid(Geometry::minkowski(2), {0, 0}, {2, 0}, {{1, 0.5}});
    EXPECT_EQ(rep.verdict, Verdict::fail);
    EXPECT_NEAR(rep.residual_max, 2.0 - 2.0 * std::sqrt(0.75), 1e-12);
}

TEST(DegeneracyProbe, EuclideanIsDegenerate) {
    const auto rep = degeneracy_probe(Geometry::euclidean(3), {0, 0, 0}, {{0, 0, 0}, {1, 0, 0}}, 0.7,
                                      Box::cube(3, -2, 2), {.starts = 32, .seed = 4});
    EXPECT_EQ(rep.verdict, Verdict::pass);
    EXPECT_EQ(rep.solution_count, 1);
}

TEST(DegeneracyProbe, MinkowskiSpacelikeIsNondegenerate) {
    const auto rep = degeneracy_probe(Geometry::minkowski(4), {0, 0, 0, 0}, {{0, 0, 0, 0}, {0, 1, 0, 0}}, 1.0,
                                      Box::cube(4, -2, 2), {.starts = 32, .seed = 4});
    EXPECT_EQ(rep.verdict, Verdict::fail);
    EXPECT_GE(rep.solution_count.value_or(0), 10);
}

TEST(DegeneracyProbe, ZeroLengthRejected) {
    EXPECT_THROW(degeneracy_probe(Geometry::euclidean(2), {0, 0}, {{0, 0}, {1, 0}}, 0.0, Box::cube(2, -1, 1)), Error);
    EXPECT_THROW(degeneracy_probe(Geometry::euclidean(2), {0, 0}, {{1, 0}, {1, 0}}, 1.0, Box::cube(2, -1, 1)), Error);
}

TEST(Suite, EuclideanAllPass) {
    const auto rep = run_suite(Geometry::euclidean(3));
    for (const auto& e : evaluate_expectations(rep, parse_expectation("all-pass")))
        EXPECT_TRUE(e.met) << to_string(e.expected.id);
}

TEST(Suite, MinkowskiFailsOnlyEigenvalues) {
    const auto rep = run_suite(Geometry::minkowski(4));
    EXPECT_EQ(rep.find(ConditionId::symmetry)->verdict, Verdict::pass);
    EXPECT_EQ(rep.find(ConditionId::dimension)->verdict, Verdict::pass);
    EXPECT_EQ(rep.find(ConditionId::linear_structure)->verdict, Verdict::pass);
    EXPECT_EQ(rep.find(ConditionId::positive_eigenvalues)->verdict, Verdict::fail);
    EXPECT_EQ(rep.find(ConditionId::continuity)->verdict, Verdict::pass);
}

TEST(Suite, TabulatedFailsContinuity) {
    const auto rep = run_suite(five_point_plane());
    EXPECT_EQ(rep.find(ConditionId::continuity)->verdict, Verdict::fail);
    EXPECT_EQ(rep.find(ConditionId::positive_eigenvalues)->verdict, Verdict::pass);
}

TEST(Suite, DeterministicPerSeed) {
    const auto a = run_suite(Geometry::distorted(4, 1, 0.01, 0.1), {.seed = 9});
    const auto b = run_suite(Geometry::distorted(4, 1, 0.01, 0.1), {.seed = 9});
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        EXPECT_EQ(a.reports[i].verdict, b.reports[i].verdict);
        EXPECT_EQ(a.reports[i].residual_max, b.reports[i].residual_max);
    }
}

TEST(Expectations, ParseAndEvaluate) {
    EXPECT_EQ(parse_expectation("all-pass").size(), 5u);
    const auto e = parse_expectation("IV:fail");
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].id, ConditionId::positive_eigenvalues);
    EXPECT_EQ(e[0].verdict, Verdict::fail);
    EXPECT_THROW(parse_expectation("IV"), Error);
    EXPECT_THROW(parse_expectation("IV:maybe"), Error);
    EXPECT_THROW(parse_expectation("VII:pass"), Error);

    SuiteReport rep;
    rep.reports.push_back({.id = ConditionId::symmetry, .verdict = Verdict::pass});
    const auto res = evaluate_expectations(rep, {{ConditionId::symmetry, Verdict::pass},
                                                 {ConditionId::continuity, Verdict::pass}});
    EXPECT_TRUE(res[0].met);
    EXPECT_FALSE(res[1].met);
    EXPECT_FALSE(res[1].actual);
}

// --- properties -------------------------------------------------------------

TEST(CheckerProperty, EuclideanSuitePassesAcrossSeeds) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t n = 2 + seed % 3;
        const auto rep = run_suite(Geometry::euclidean(n), {.sample_size = 10, .restarts = 4, .seed = seed});
        for (const auto& e : evaluate_expectations(rep, parse_expectation("all-pass")))
            EXPECT_TRUE(e.met) << "seed " << seed << " " << to_string(e.expected.id);
    }
}

TEST(CheckerProperty, LinearStructureInvariantUnderFrameChoice) {
    Gen gen(41);
    const auto g = Geometry::euclidean(3);
    const auto sample = gen.cloud(8, 3);
    for (int i = 0; i < 20; ++i) {
        const auto rep = check_linear_structure(g, Skeleton(gen.cloud(4, 3)), sample);
        EXPECT_EQ(rep.verdict, Verdict::pass);
    }
}

TEST(CheckerProperty, EuclideanTriangleInequalityHolds) {
    Gen gen(42);
    for (int i = 0; i < 20; ++i) {
        const auto rep = check_metric_axioms(Geometry::euclidean(3), gen.cloud(8, 3, 5.0));
        EXPECT_EQ(rep.triangle.verdict, Verdict::pass);
    }
}

TEST(CheckerImmanence, OpaqueSymmetryUsesOnlySigma) {
    // The library checks take concrete geometries; the core algebra they rest on
    // must already work with nothing but sigma.
    testkit::OpaqueGeometry og(Geometry::euclidean(2), {{0, 0}, {1, 0}, {0, 1}, {3, 2}});
    const BasicSkeleton<testkit::Handle> frame{og.handle(0), og.handle(1), og.handle(2)};
    const auto fd = frame_data(og, frame);
    const auto x = covariant_coordinates(og, frame, og.handle(3));
    EXPECT_NEAR(x[0], 3.0, 1e-15);
    EXPECT_NEAR(x[1], 2.0, 1e-15);
    EXPECT_NEAR(fd.eigenvalues.back(), 1.0, 1e-15);
}
