#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <gaussconvex/body.hpp>
#include <gaussconvex/grammar.hpp>

using namespace gaussconvex;
using body::SupportBody;
using body::Vec;

namespace {

constexpr double pi = std::numbers::pi;

Vec dir2(double angle) { return {std::cos(angle), std::sin(angle)}; }

// rho(theta) = min over u with <theta,u> > 0 of h(u) / <theta,u>, on a dense angle grid
double radial_from_support(const SupportBody& K, double angle, int grid = 200000) {
    const Vec th = dir2(angle);
    double best = body::inf;
    for (int i = 0; i < grid; ++i) {
        const Vec u = dir2(2.0 * pi * i / grid);
        const double c = body::dot(th, u);
        if (c <= 1e-9) continue;
        best = std::min(best, K.support(u) / c);
    }
    return best;
}

std::vector<SupportBody> planar_bodies() {
    using namespace body;
    return {ball(2, 1.3),
            box({0.5, 1.1}),
            ellipsoid({0.4, 1.5}),
            lp_ball(2, 0.8, 1.0),
            lp_ball(2, 1.0, 3.0),
            minkowski_sum(box({0.5, 0.2}), ball(2, 1.0), 0.4),
            interpolate(ellipsoid({1.0, 0.3}), box({0.4, 0.9}), 0.35),
            interpolate(lp_ball(2, 1.0, 4.0), ball(2, 0.5), 0.5)};
}

} // namespace

TEST(Body, ClosedFormSupport) {
    EXPECT_EQ(body::ball(3, 2.0).support(Vec{0.6, 0.0, 0.8}), 2.0);
    EXPECT_NEAR(body::box({1.0, 2.0}).support(Vec{0.6, -0.8}), 0.6 + 1.6, 1e-15);
    EXPECT_NEAR(body::ellipsoid({1.0, 2.0}).support(Vec{0.6, 0.8}), std::sqrt(0.36 + 4 * 0.64), 1e-15);
    const auto S = body::strip(2, 0.7);
    EXPECT_NEAR(S.support(Vec{-1.0, 0.0}), 0.7, 1e-15);
    EXPECT_TRUE(std::isinf(S.support(Vec{0.6, 0.8})));
    const auto C = body::cylinder(3, 2, 1.5);
    EXPECT_NEAR(C.support(Vec{0.6, 0.8, 0.0}), 1.5, 1e-15);
    EXPECT_TRUE(std::isinf(C.support(Vec{0.0, 0.6, 0.8})));
}

TEST(Body, StripRadial) {
    const auto S = body::strip(2, 0.7);
    for (double a : {0.0, 0.3, 1.0, 1.4}) EXPECT_NEAR(S.radial(dir2(a)), 0.7 / std::abs(std::cos(a)), 1e-13);
    EXPECT_TRUE(std::isinf(S.radial(Vec{0.0, 1.0})));
}

TEST(Body, InvalidParameters) {
    EXPECT_THROW(body::ball(2, 0.0), std::invalid_argument);
    EXPECT_THROW(body::strip(2, -1.0), std::invalid_argument);
    EXPECT_THROW(body::lp_ball(2, 1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(body::box({1.0, -0.2}), std::invalid_argument);
    EXPECT_THROW(body::cylinder(2, 3, 1.0), std::invalid_argument);
    EXPECT_THROW(body::translate(body::ball(2, 1.0), {1.5, 0.0}), std::invalid_argument);
    EXPECT_THROW(body::interpolate(body::ball(2, 1.0), body::ball(3, 1.0), 0.5), std::invalid_argument);
}

TEST(Body, RadialAgreesWithSupportDuality) {
    for (const auto& K : planar_bodies())
        for (double a : {0.1, 0.77, 1.9, 3.3, 5.0}) {
            const double r = K.radial(dir2(a));
            EXPECT_NEAR(r, radial_from_support(K, a), 2e-6 * r) << K.label() << " angle " << a;
        }
}

TEST(Body, GaugeTimesRadialIsNorm) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N;
    for (const auto& K : planar_bodies())
        for (int i = 0; i < 50; ++i) {
            Vec x{N(rng), N(rng)};
            const double r = body::norm(x);
            const Vec th{x[0] / r, x[1] / r};
            EXPECT_NEAR(K.gauge(x) * K.radial(th), r, 1e-9 * r) << K.label();
        }
}

TEST(Body, RadialPointLiesUnderEverySupportingLine) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 2.0 * pi);
    for (const auto& K : planar_bodies())
        for (int i = 0; i < 40; ++i) {
            const Vec th = dir2(U(rng));
            const double r = K.radial(th);
            const Vec x{r * th[0], r * th[1]};
            for (int j = 0; j < 64; ++j) {
                const Vec u = dir2(2.0 * pi * j / 64);
                EXPECT_LE(body::dot(x, u), K.support(u) + 1e-9) << K.label();
            }
        }
}

TEST(Body, SupportOfInterpolationIsAffine) {
    const auto K = body::box({0.3, 1.2}), L = body::ellipsoid({1.0, 0.4});
    for (double lam : {0.0, 0.25, 0.6, 1.0}) {
        const auto M = body::interpolate(K, L, lam);
        for (double a : {0.2, 1.1, 2.5}) {
            const Vec u = dir2(a);
            EXPECT_NEAR(M.support(u), (1 - lam) * K.support(u) + lam * L.support(u), 1e-14);
        }
    }
}

TEST(Body, BallSumIsABall) {
    const auto M = body::minkowski_sum(body::ball(3, 0.8), body::ball(3, 1.0), 0.5);
    for (Vec th : {Vec{1, 0, 0}, Vec{0.6, 0.0, 0.8}, Vec{0.48, 0.6, 0.64}}) EXPECT_NEAR(M.radial(th), 1.3, 1e-12);
}

TEST(Body, BallPlusBoxRadialInThreeDimensions) {
    // distance from a radial point to the box equals the ball radius
    const auto M = body::minkowski_sum(body::box({0.5, 0.8, 1.2}), body::ball(3, 1.0), 0.7);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N;
    for (int i = 0; i < 30; ++i) {
        Vec th{N(rng), N(rng), N(rng)};
        const double r = body::norm(th);
        for (auto& v : th) v /= r;
        const double rho = M.radial(th);
        double d2 = 0.0;
        const double a[3] = {0.5, 0.8, 1.2};
        for (int k = 0; k < 3; ++k) {
            const double x = rho * th[k];
            const double e = std::max(std::abs(x) - a[k], 0.0);
            d2 += e * e;
        }
        EXPECT_NEAR(std::sqrt(d2), 0.7, 1e-9);
    }
}

TEST(Body, TranslateShiftsSupport) {
    const auto K = body::ball(2, 1.0);
    const auto T = body::translate(K, {0.3, -0.2});
    EXPECT_FALSE(T.symmetric());
    for (double a : {0.0, 1.0, 2.0}) {
        const Vec u = dir2(a);
        EXPECT_NEAR(T.support(u), 1.0 + 0.3 * u[0] - 0.2 * u[1], 1e-15);
    }
    EXPECT_TRUE(T.contains(Vec{1.25, -0.2}));
    EXPECT_FALSE(T.contains(Vec{-0.75, 0.0}));
    EXPECT_NEAR(T.radial(Vec{1.0, 0.0}), 0.3 + std::sqrt(1.0 - 0.04), 1e-12);
}

TEST(Body, Inradius) {
    EXPECT_EQ(*body::ball(3, 1.5).inradius(), 1.5);
    EXPECT_EQ(*body::box({0.5, 0.3, 2.0}).inradius(), 0.3);
    EXPECT_EQ(*body::ellipsoid({0.7, 0.2}).inradius(), 0.2);
    EXPECT_NEAR(*body::lp_ball(2, 1.0, 1.0).inradius(), 1.0 / std::sqrt(2.0), 1e-14);
    EXPECT_EQ(*body::strip(3, 0.4).inradius(), 0.4);
    EXPECT_FALSE(body::translate(body::ball(2, 1.0), {0.1, 0.0}).inradius().has_value());
}

TEST(Body, DilationScalesRadial) {
    for (const auto& K : planar_bodies()) {
        const auto D = K.dilated(1.7);
        for (double a : {0.4, 2.2}) EXPECT_NEAR(D.radial(dir2(a)), 1.7 * K.radial(dir2(a)), 1e-9) << K.label();
    }
}

TEST(Grammar, Primitives) {
    const auto B = grammar::parse_body("ball:R=1.5", 3);
    EXPECT_EQ(B.dim(), 3);
    EXPECT_EQ(B.support(Vec{0, 0, 1}), 1.5);
    const auto C = grammar::parse_body("cylinder:k=2,R=1", 3);
    EXPECT_EQ(C.bounded().size(), 2u);
    const auto E = grammar::parse_body(" ellipsoid : c = [ 1 , 2 ] ", 5);
    EXPECT_EQ(E.dim(), 2);
    EXPECT_NEAR(E.support(Vec{0.0, 1.0}), 2.0, 1e-15);
    const auto P = grammar::parse_body("lp_ball:r=1,p=3,n=4", 2);
    EXPECT_EQ(P.dim(), 4);
    EXPECT_TRUE(grammar::parse_body("space", 2).is_space());
}

TEST(Grammar, CompositesMatchDirectConstruction) {
    const auto I = grammar::parse_body("interp:lambda=0.25;box:a=[1,0.5]|(ellipsoid:c=[0.3,2])", 2);
    const auto J = body::interpolate(body::box({1.0, 0.5}), body::ellipsoid({0.3, 2.0}), 0.25);
    const auto T = grammar::parse_body("translate:v=[0.1,0.2];ball:R=1", 2);
    for (double a : {0.3, 1.7, 4.0}) {
        EXPECT_NEAR(I.support(dir2(a)), J.support(dir2(a)), 1e-15);
        EXPECT_NEAR(T.support(dir2(a)), 1.0 + 0.1 * std::cos(a) + 0.2 * std::sin(a), 1e-15);
    }
}

TEST(Grammar, Errors) {
    for (const char* bad : {"", "ball", "ball:", "ball:R=", "ball:R=x", "cube:a=1", "box:a=[1,2", "ball:R=1,R=2",
                            "interp:lambda=0.5;ball:R=1", "box:a=[1,2],n=3", "ball:R=1 trailing", "(ball:R=1"})
        EXPECT_THROW(grammar::parse_body(bad, 2), std::invalid_argument) << bad;
    EXPECT_THROW(grammar::parse_body("ball:R=-1", 2), std::invalid_argument);
}

TEST(Grammar, Polynomials) {
    const auto p = grammar::parse_poly("0.5*x1^2*x2 - 3 + x3", 3);
    EXPECT_NEAR(p(Vec{2.0, 1.5, -1.0}), 0.5 * 4 * 1.5 - 3 - 1.0, 1e-15);
    EXPECT_EQ(p.degree(), 3);
    EXPECT_FALSE(p.is_even());
    EXPECT_TRUE(grammar::parse_poly("x1^2 + 2*x2^2", 2).is_even());
    EXPECT_THROW(grammar::parse_poly("x4", 3), std::invalid_argument);
    EXPECT_THROW(grammar::parse_poly("x1^", 3), std::invalid_argument);
}
