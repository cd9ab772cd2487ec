#include <gtest/gtest.h>

#include <cmath>

#include <gaussconvex/cylinder.hpp>
#include <gaussconvex/verify.hpp>

using namespace gaussconvex;
namespace vf = verify;
using poly::MultiPoly;

namespace {

MultiPoly x(int n, int i) { return MultiPoly::coordinate(n, i); }

} // namespace

TEST(Transforms, DerivativesMatchDifferences) {
    for (const auto& T : {vf::Transform::psi_inv(), vf::Transform::phi_inv(), vf::Transform::power(0.0),
                          vf::Transform::power(0.4), vf::Transform::conjecture_F(2), vf::Transform::weak_F(2)})
        for (double a : {0.2, 0.5, 0.8}) {
            const double h = 1e-5;
            const double fd = (T.f(a + h) - T.f(a - h)) / (2 * h);
            EXPECT_NEAR(T.derivative(a), fd, 1e-5 * std::abs(fd)) << T.id << " " << a;
        }
}

TEST(Transforms, PowerFamilyIsContinuousAtZero) {
    for (double a : {0.1, 0.6}) EXPECT_NEAR(vf::Transform::power(1e-9).f(a), std::log(a), 1e-8);
}

TEST(Transforms, ConjectureFIndependentValues) {
    // mpmath values, C0 = 1/2 (tests/oracles)
    const auto F = vf::Transform::conjecture_F(2);
    EXPECT_NEAR(F.f(0.3), 0.49722050618134387957, 1e-9);
    EXPECT_NEAR(F.f(0.5), 0.69314718055958562924, 1e-9);
}

TEST(Concavity, EhrhardPairIsConcave) {
    const auto r = vf::concavity_check(vf::Transform::psi_inv(), body::ball(2, 0.5), body::box({1.0, 0.3}),
                                       vf::uniform_t(17));
    EXPECT_EQ(r.verdict, vf::Verdict::concave_within_tol);
    EXPECT_EQ(r.second_diff.size(), 15u);
    EXPECT_LE(r.worst_ratio, 1.0);
}

TEST(Concavity, ConvexTransformIsFlagged) {
    // a -> a^3 is convex, so along a growing family of balls the second differences turn positive
    const auto r = vf::concavity_check(vf::Transform::power(3.0), body::ball(2, 0.2), body::ball(2, 0.6),
                                       vf::uniform_t(9));
    EXPECT_EQ(r.verdict, vf::Verdict::violation);
    EXPECT_TRUE(r.witness.has_value());
    EXPECT_TRUE(r.confirmed);
}

TEST(Concavity, RejectsBadGrid) {
    EXPECT_THROW(vf::concavity_check(vf::Transform::psi_inv(), body::ball(2, 0.5), body::ball(2, 1.0), {0.0, 0.5}),
                 std::invalid_argument);
}

TEST(MaxPower, AtLeastOneOverN) {
    const auto t = vf::uniform_t(17);
    const auto r = vf::max_power(body::ball(2, 0.5), body::box({1.0, 0.3}), t);
    EXPECT_GE(r.p, 0.5);
}

TEST(MaxPower, NonincreasingUnderRefinement) {
    const auto K = body::strip(2, 0.4), L = body::ball(2, 1.2);
    const auto coarse = vf::max_power(K, L, vf::uniform_t(9));
    const auto fine = vf::max_power(K, L, vf::uniform_t(17));
    EXPECT_LE(fine.p, coarse.p + 1e-6);
}

TEST(GaussMain, EqualityOnCylinders) {
    for (int k : {1, 2, 3})
        for (double a : {0.2, 0.8}) {
            const double R = cylinder::radius_of_measure(k, a);
            const auto g = vf::gauss_main_bound(body::cylinder(3, k, R));
            EXPECT_NEAR(g.bound, cylinder::ps_cylinder(k, a), 1e-6) << k << " " << a;
        }
}

TEST(GaussMain, PrintedAlphaIsNotTheMaximiser) {
    const auto g = vf::gauss_main_bound(body::box({0.5, 0.8, 1.2}));
    EXPECT_TRUE(g.dominates_sweep);
    EXPECT_GE(g.bound, g.bound_at_printed - 1e-12);
}

TEST(MinkowskiFirst, SelfPairSlackAndIdentity) {
    const auto K = body::ellipsoid({0.6, 1.4});
    const auto r = vf::minkowski_first_check(K, K);
    EXPECT_GE(r.slack, -r.budget);
    const auto mb = moments::moments_bundle(K);
    const double id = mb.a.value * (2 - mb.m2.value);
    EXPECT_NEAR(r.gamma1.value, id, 1e-5 * id);
}

TEST(BrascampLieb, LinearAlongCylinderAxisIsEquality) {
    const auto K = body::cylinder(3, 1, 0.7);
    // the bounded axis is x1; a linear function of the free coordinates gives equality
    const auto b = vf::brascamp_lieb_check(K, x(3, 1), vf::BLMode::gaussian);
    EXPECT_NEAR(b.slack, 0.0, 1e-6);
}

TEST(BrascampLieb, Instances) {
    const auto K = body::box({0.5, 1.2});
    const auto f = x(2, 0) * x(2, 0);
    EXPECT_GE(vf::brascamp_lieb_check(K, f, vf::BLMode::gaussian_even_half).slack, 0.0);
    EXPECT_GE(vf::brascamp_lieb_check(K, x(2, 0) * x(2, 1) + x(2, 1), vf::BLMode::gaussian).slack, 0.0);
    const auto c = vf::brascamp_lieb_check(K, MultiPoly::constant(2, 3.0), vf::BLMode::gaussian);
    EXPECT_NEAR(c.slack, 0.0, 1e-12);
    EXPECT_THROW(vf::brascamp_lieb_check(K, x(2, 0), vf::BLMode::gaussian_even_half), std::invalid_argument);
}

TEST(Moments, SuiteMargins) {
    for (const auto& K : {body::ball(3, 0.8), body::box({0.5, 0.8, 1.2}), body::lp_ball(2, 1.0, 1.0)}) {
        const auto s = vf::moment_inequality_suite(K);
        EXPECT_GE(s.cfm_margin, -1e-8) << K.label();
        EXPECT_GE(s.ex2_margin, 0.0);
        EXPECT_GE(s.dir2_margin, -1e-8);
        ASSERT_TRUE(s.alpha && s.beta);
        EXPECT_LE(*s.alpha, 1.0 + 1e-8);
        EXPECT_GE(*s.beta, -1.0 - 1e-8);
    }
    const auto t = vf::moment_inequality_suite(body::translate(body::ball(2, 1.0), {0.3, 0.0}), {1.0, 0.0});
    ASSERT_TRUE(t.eta_margin.has_value());
    EXPECT_GE(*t.eta_margin, -1e-8);
}

TEST(Moments, HalfspaceAlphaValues) {
    // the quadrature value equals -eta(a); the cubic expression is a different number
    const auto h = vf::halfspace_alpha(0.3);
    EXPECT_NEAR(h.quadrature, 0.45246907005590013962, 1e-10);
    EXPECT_NEAR(h.minus_eta, 0.45246907005590013962, 1e-12);
    EXPECT_NEAR(h.printed, 0.12568247441266231681, 1e-12);
}

TEST(SInequality, StripIsTight) {
    const auto s = vf::s_inequality_check(body::strip(2, 0.6));
    for (std::size_t i = 0; i < s.margin.size(); ++i) EXPECT_NEAR(s.margin[i], 0.0, 1e-9 + s.err[i]);
    const auto b = vf::s_inequality_check(body::ball(2, 1.0));
    for (std::size_t i = 0; i < b.margin.size(); ++i) EXPECT_GE(b.margin[i], -b.err[i]);
}

TEST(PropGauss, HalfNormSquaredIsEquality) {
    const MultiPoly u = 0.5 * MultiPoly::norm2(3);
    for (const auto& K : {body::ball(3, 1.0), body::box({0.5, 0.8, 1.2})}) {
        const auto p = vf::propgauss_check(K, u);
        EXPECT_NEAR(p.lhs, 3.0, 1e-9);
        EXPECT_NEAR(p.slack, 0.0, 1e-9) << K.label();
    }
    const auto q = vf::propgauss_check(body::ball(2, 1.0), x(2, 0) * x(2, 0) + 2.0 * (x(2, 1) * x(2, 1)));
    EXPECT_GT(q.slack, 0.0);
}

TEST(SaintVenant, ExactForBallsBoundForBoxes) {
    const auto a = vf::saint_venant_check(body::ball(2, 1.0));
    EXPECT_TRUE(a.definite);
    EXPECT_NEAR(a.body.value, 0.16050722187348681872, 1e-11);
    EXPECT_GT(a.margin, 0.0);
    const auto b = vf::saint_venant_check(body::box({0.5, 0.9}));
    EXPECT_FALSE(b.definite);
    EXPECT_GT(b.margin, 0.0);
}

TEST(CrossValidation, BoxInThreeDimensions) {
    const auto c = vf::cross_validate(body::box({0.5, 0.8, 1.2}), 200000, 7);
    EXPECT_LE(c.diff, 3.0 * c.combined);
}

TEST(BadFunc, ContinuousAcrossSwitches) {
    vf::BadFunc F(2);
    for (double a : F.switch_points()) {
        const double l = F(a - 1e-9), r = F(a + 1e-9);
        EXPECT_NEAR(l, r, 1e-6) << a;
    }
    EXPECT_FALSE(F.switch_points().empty());
}

TEST(Counterexample, NoWitnessInOneDimension) {
    vf::SearchOptions opt;
    opt.sizes = {0.1, 0.4, 1.2, 2.4};
    opt.points = 9;
    const auto rep = vf::counterexample_search(vf::Transform::phi_inv(), vf::Family::interval_pairs, 2, opt);
    EXPECT_EQ(rep.n, 1);
    EXPECT_EQ(rep.pairs_tested, 6);
    EXPECT_FALSE(rep.witness.has_value());
}
