#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tgeom/spacetime.hpp"

using namespace tgeom;
using tgeom::testkit::Gen;

namespace {
const DistortionParams kRef{.d = 0.01, .sigma0 = 0.1, .c = 1.0, .mu_d = 1.0};

double distorted_dot(const Geometry& g, const Point& a, const Point& b, const Point& c) {
    return scalar_general(g, PointVector{a, b}, PointVector{b, c});
}
} // namespace

TEST(Params, RegimeChecks) {
    EXPECT_NO_THROW(kRef.validate());
    try {
        DistortionParams{.d = 0.6, .mu_d = 1.0}.validate_basic();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::parameter_regime);
    }
    // mu_M^2 = 0.98 < 2 sigma0 = 1.0
    try {
        DistortionParams{.d = 0.01, .sigma0 = 0.5, .mu_d = 1.0}.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::parameter_regime);
    }
    EXPECT_THROW(DistortionParams{.d = -1.0}.validate_basic(), Error);
    EXPECT_THROW(DistortionParams{.mu_d = 0.0}.validate_basic(), Error);
}

TEST(ClosedForms, LinkRelations) {
    const auto lr = link_relations(kRef);
    EXPECT_NEAR(lr.mu_M_sq, 0.98, 1e-15);
    EXPECT_EQ(lr.scalar_shift, -0.01);
}

TEST(ClosedForms, RadiusAtMidpointAndEnds) {
    EXPECT_NEAR(radius_closed_form(kRef, 0.5), std::sqrt(0.015), 1e-15);
    EXPECT_NEAR(radius_closed_form(kRef, 0.5), 0.12247, 1e-5);
    EXPECT_EQ(radius_closed_form(kRef, 0.0), 0.0);
    EXPECT_EQ(radius_closed_form(kRef, 1.0), 0.0);
    EXPECT_THROW(radius_closed_form(kRef, 1.5), Error);
}

TEST(ClosedForms, RadiusVanishesWithoutDistortion) {
    const DistortionParams p{.d = 0.0, .sigma0 = 0.1, .mu_d = 1.0};
    for (int k = 0; k <= 20; ++k) EXPECT_EQ(radius_closed_form(p, k / 20.0), 0.0);
}

TEST(ClosedForms, RadiusOverlappingBranchesRejected) {
    try {
        radius_closed_form({.d = 0.01, .sigma0 = 0.2, .mu_d = 1.0}, 0.3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::parameter_regime);
    }
}

TEST(ClosedForms, WobbleAngle) {
    const auto w = wobble_angle_closed_form(kRef);
    EXPECT_NEAR(w.cosh_theta, 0.99 / 0.98, 1e-15);
    EXPECT_NEAR(w.cosh_theta, 1.0102041, 1e-7);
    EXPECT_NEAR(w.small_d_approx, std::sqrt(0.02), 1e-15);
    EXPECT_LT(std::abs(w.small_d_approx - w.theta) / w.theta, 0.02);
}

TEST(ClosedForms, JointCoshFromParallelism) {
    EXPECT_NEAR(joint_cosh_from_parallelism(kRef), 1.01 / 0.98, 1e-15);
    EXPECT_EQ(joint_cosh_from_parallelism({.d = 0.0, .mu_d = 2.0}), 1.0);
}

TEST(ClosedForms, DistortionFromQuantum) {
    EXPECT_DOUBLE_EQ(distortion_from_quantum(2.0, 0.5, 4.0), 0.5);
    EXPECT_THROW(distortion_from_quantum(0.0, 1.0, 1.0), Error);
}

TEST(ExtendChain, FirstStepGeometry) {
    const double mu_m = std::sqrt(0.98);
    const Point prev{0, 0, 0, 0}, cur{mu_m, 0, 0, 0};
    const auto next = extend_chain<double>(kRef, prev, cur, 0.5, 0.0);
    // From (u.v)_M = mu^2 + d and |v|_M = mu_M, independently of the code path.
    const double v0 = 1.01 / mu_m;
    EXPECT_NEAR(next[0] - cur[0], v0, 1e-14);
    const double step = std::hypot(next[1], next[2], next[3]);
    EXPECT_NEAR(step, std::sqrt(v0 * v0 - 0.98), 1e-14);
    EXPECT_NEAR(step, 0.2468, 1e-4);
}

TEST(ExtendChain, RejectsPastDirectedLink) {
    EXPECT_THROW(extend_chain<double>(kRef, {1, 0, 0, 0}, {0, 0, 0, 0}, 0.1, 0.2), Error);
}

TEST(SimulateChain, DeterministicPerSeed) {
    const auto a = simulate_chain(kRef, 50, 7);
    const auto b = simulate_chain(kRef, 50, 7);
    const auto c = simulate_chain(kRef, 50, 8);
    ASSERT_EQ(a.points.size(), 51u);
    for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_TRUE(a.points[i] == b.points[i]);
    EXPECT_FALSE(a.points.back() == c.points.back());
}

TEST(SimulateChain, ZeroDistortionIsStraight) {
    const auto ch = simulate_chain({.d = 0.0, .sigma0 = 0.1, .mu_d = 1.0}, 100, 3);
    for (std::size_t i = 0; i < ch.points.size(); ++i) EXPECT_EQ(transverse_displacement(ch, i), 0.0);
    for (double c : ch.cosh_theta_dM) EXPECT_NEAR(c, 1.0, 1e-15);
}

TEST(SimulateChain, NeedsTwoLinks) {
    EXPECT_THROW(simulate_chain(kRef, 1, 0), Error);
}

TEST(VerifyChain, InvariantsHold) {
    const auto ch = simulate_chain(kRef, 300, 11);
    const auto chk = verify_chain(ch);
    EXPECT_LT(chk.max_link_error, 1e-9);
    EXPECT_LT(chk.max_parallel_residual, 1e-9);
    EXPECT_TRUE(chk.time_increasing);
    EXPECT_FALSE(chk.touched_middle_branch);
}

TEST(VerifyChain, DetectsBrokenLink) {
    auto ch = simulate_chain(kRef, 10, 11);
    ch.points[5][1] += ChainReal(0.05);
    const auto chk = verify_chain(ch);
    EXPECT_GT(chk.max_link_error, 1e-4);
}

TEST(Ensemble, AggregatesInSeedOrder) {
    const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<WorldChain> kept;
    const auto s = run_ensemble(kRef, 40, seeds, &kept);
    ASSERT_EQ(kept.size(), seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) EXPECT_EQ(kept[i].seed, seeds[i]);
    const auto again = run_ensemble(kRef, 40, seeds);
    EXPECT_EQ(s.mean_cosh, again.mean_cosh);
    ASSERT_EQ(s.transverse_rms_by_N.size(), again.transverse_rms_by_N.size());
    for (std::size_t i = 0; i < s.transverse_rms_by_N.size(); ++i)
        EXPECT_EQ(s.transverse_rms_by_N[i].rms, again.transverse_rms_by_N[i].rms);
    EXPECT_EQ(s.transverse_rms_by_N.back().n, 40u);
    EXPECT_NEAR(s.mean_cosh, joint_cosh_from_parallelism(kRef), 1e-12);
}

TEST(Ensemble, ZeroDistortionHasNoDrift) {
    const auto s = run_ensemble({.d = 0.0, .sigma0 = 0.1, .mu_d = 1.0}, 20, {1, 2, 3});
    for (const auto& t : s.transverse_rms_by_N) EXPECT_EQ(t.rms, 0.0);
}

TEST(Ensemble, BadRegimeThrowsToCaller) {
    EXPECT_THROW(run_ensemble({.d = 0.6, .sigma0 = 0.1, .mu_d = 1.0}, 10, {1, 2, 3, 4}), Error);
    EXPECT_THROW(run_ensemble({.d = 0.01, .sigma0 = 0.1, .mu_d = 1.0}, 10, {}), Error);
}

TEST(Ensemble, CheckpointGrid) {
    EXPECT_EQ(checkpoint_links(100), (std::vector<std::size_t>{1, 2, 5, 10, 20, 50, 100}));
    EXPECT_EQ(checkpoint_links(30), (std::vector<std::size_t>{1, 2, 5, 10, 20, 30}));
}

TEST(SegmentProfile, ArcFractionMatchesClosedForm) {
    const auto sp = segment_profile(kRef, {.points = 21});
    const auto& r = sp.profile.radius;
    ASSERT_EQ(r.size(), 21u);
    EXPECT_LT(r.front(), 1e-6);
    EXPECT_LT(r.back(), 1e-6);
    EXPECT_NEAR(r[10] * r[10], 0.015, 1e-6);
    for (std::size_t k = 0; k < r.size(); ++k) EXPECT_NEAR(r[k], r[r.size() - 1 - k], 1e-6);
    EXPECT_LT(sp.max_rel_deviation, 0.01);
}

TEST(SegmentProfile, CoordinateTimeDeviatesMore) {
    const auto arc = segment_profile(kRef, {.points = 21});
    const auto naive = segment_profile(kRef, {.points = 21, .parametrization = Parametrization::coordinate_time});
    EXPECT_NEAR(naive.profile.radius[10] * naive.profile.radius[10], 0.015, 1e-6);
    EXPECT_GT(naive.max_rel_deviation, arc.max_rel_deviation);
}

// --- properties -------------------------------------------------------------

TEST(SpacetimeProperty, ExtendChainKeepsLengthAndParallelism) {
    Gen gen(61);
    const auto g = kRef.geometry();
    const double mu_m = std::sqrt(kRef.mu_m_sq());
    for (int i = 0; i < 300; ++i) {
        // An arbitrary previous link of Minkowski length mu_M.
        Point u = gen.timelike_offset(mu_m, mu_m);
        const Point prev = gen.point(4);
        const Point cur = prev + u;
        const Point next = extend_chain<double>(kRef, prev, cur, gen.uniform(0, 1), gen.uniform(0, 1));
        EXPECT_NEAR(g.sigma(cur, next), 0.5, 1e-12);
        EXPECT_NEAR(distorted_dot(g, prev, cur, next), 1.0, 1e-11);
    }
}

TEST(SpacetimeProperty, SimulatedJointAngleIsTheParallelismValue) {
    for (double d : {0.001, 0.01, 0.02}) {
        const DistortionParams p{.d = d, .sigma0 = 0.1, .mu_d = 1.0};
        const auto ch = simulate_chain(p, 100, 5);
        for (double c : ch.cosh_theta_dM) EXPECT_NEAR(c, joint_cosh_from_parallelism(p), 1e-12);
    }
}

TEST(SpacetimeProperty, SmallDApproximationConverges) {
    for (double d : {1e-4, 1e-3, 5e-3, 1e-2}) {
        const auto w = wobble_angle_closed_form({.d = d, .mu_d = 1.0});
        EXPECT_LT(std::abs(w.small_d_approx - w.theta) / w.theta, 0.02) << d;
    }
}

TEST(SpacetimeProperty, ClosedFormRadiusSymmetric) {
    Gen gen(62);
    for (int i = 0; i < 200; ++i) {
        const double tau = gen.uniform(0, 1);
        EXPECT_NEAR(radius_closed_form(kRef, tau), radius_closed_form(kRef, 1 - tau), 1e-12);
    }
}

TEST(SpacetimeProperty, ClosedFormRadiusContinuousAtBranchPoint) {
    const double b = profile_branch_point(kRef);
    EXPECT_NEAR(radius_closed_form(kRef, b - 1e-12), radius_closed_form(kRef, b + 1e-12), 1e-9);
}

TEST(SpacetimeProperty, DistortedSigmaIsBoostInvariant) {
    Gen gen(63);
    const auto g = kRef.geometry();
    for (int i = 0; i < 500; ++i) {
        const std::array<double, 3> beta{gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5), gen.uniform(-0.5, 0.5)};
        const Point shift = gen.point(4, 5);
        const Point p = gen.point(4), q = gen.point(4);
        const double s = g.sigma(p, q);
        const double t = g.sigma(lorentz_transform(p, beta, shift), lorentz_transform(q, beta, shift));
        EXPECT_NEAR(t, s, 1e-9 * std::max(1.0, std::abs(s)));
    }
}

TEST(SpacetimeProperty, TransverseDriftGrowsFasterThanDiffusion) {
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 32; ++s) seeds.push_back(s);
    const auto sum = run_ensemble(kRef, 100, seeds);
    double r10 = 0, r100 = 0;
    for (const auto& t : sum.transverse_rms_by_N) {
        if (t.n == 10) r10 = t.rms;
        if (t.n == 100) r100 = t.rms;
    }
    ASSERT_GT(r10, 0.0);
    // A random walk would give sqrt(10) ~ 3.2; the chain's rapidity itself diffuses.
    EXPECT_GT(r100 / r10, 10.0);
}
