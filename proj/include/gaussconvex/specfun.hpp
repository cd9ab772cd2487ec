#pragma once

// One-dimensional Gaussian kernel: the truncated moments
//   J_p(R) = int_0^R t^p exp(-t^2/2) dt,
// the normal cdf and its symmetric variant, and their inverses.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"

namespace gaussconvex::specfun {

inline constexpr double default_tol_rel = 1e-12;
inline constexpr double inf = std::numeric_limits<double>::infinity();

// t^p e^{-t^2/2}
inline double g(double p, double t) {
    require_domain(p >= 0.0 && t >= 0.0, "g: negative argument");
    if (t == 0.0) return p == 0.0 ? 1.0 : 0.0;
    if (std::isinf(t)) return 0.0;
    return std::exp(p * std::log(t) - 0.5 * t * t);
}

// J_p(+inf) = 2^{(p-1)/2} Gamma((p+1)/2)
inline double c(double p) {
    require_domain(p >= 0.0, "c: negative order");
    return std::exp(0.5 * (p - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * (p + 1.0)));
}

inline double j_lower(double p, double R) {
    require_domain(p >= 0.0 && R >= 0.0, "j_lower: negative argument");
    if (R == 0.0) return 0.0;
    if (std::isinf(R)) return c(p);
    return c(p) * boost::math::gamma_p(0.5 * (p + 1.0), 0.5 * R * R);
}

// c_p - J_p(R), accurate in the tail
inline double j_upper(double p, double R) {
    require_domain(p >= 0.0 && R >= 0.0, "j_upper: negative argument");
    if (R == 0.0) return c(p);
    if (std::isinf(R)) return 0.0;
    return c(p) * boost::math::gamma_q(0.5 * (p + 1.0), 0.5 * R * R);
}

namespace detail {

// Solves J_p(R) = y, working with the regularized complement when y is in
// the upper half so that radii near the tail keep full relative accuracy.
inline double j_solve(double p, double frac_lower, double frac_upper, double tol_rel) {
    const double s = 0.5 * (p + 1.0);
    const bool use_upper = frac_lower > 0.5;
    auto residual = [&](double R) {
        const double x = 0.5 * R * R;
        return use_upper ? frac_upper - boost::math::gamma_q(s, x)
                         : boost::math::gamma_p(s, x) - frac_lower;
    };
    // d/dR of the regularized lower function is g_p(R)/c_p
    const double cp = c(p);
    auto slope = [&](double R) { return g(p, R) / cp; };

    double lo = 0.0, hi = 1.0;
    while (residual(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw numerical_failure("j_inverse: bracket growth failed", hi);
    }
    double R = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = residual(R);
        if (f == 0.0) return R;
        if (f < 0.0) lo = R; else hi = R;
        const double d = slope(R);
        double next = (d > 0.0) ? R - f / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::abs(next - R);
        R = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * R) break;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    const double achieved = std::abs(residual(R));
    if (achieved > tol_rel) throw numerical_failure("j_inverse: no convergence", achieved);
    return R;
}

} // namespace detail

inline double j_inverse(double p, double y, double tol_rel = default_tol_rel) {
    require_domain(p >= 0.0, "j_inverse: negative order");
    const double cp = c(p);
    require_domain(y >= 0.0 && y < cp, "j_inverse: value outside [0, c_p)");
    if (y == 0.0) return 0.0;
    return detail::j_solve(p, y / cp, (cp - y) / cp, tol_rel);
}

// Radius R with J_p(R)/c_p = a, where the complement 1-a may be supplied
// separately to avoid cancellation.
inline double j_inverse_fraction(double p, double a, double one_minus_a,
                                 double tol_rel = default_tol_rel) {
    require_domain(p >= 0.0, "j_inverse_fraction: negative order");
    require_domain(a >= 0.0 && a < 1.0, "j_inverse_fraction: fraction outside [0,1)");
    if (a == 0.0) return 0.0;
    return detail::j_solve(p, a, one_minus_a, tol_rel);
}

inline double psi(double t) {
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

inline double psi_inv(double a) {
    require_domain(a > 0.0 && a < 1.0, "psi_inv: argument outside (0,1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * a);
}

inline double phi(double t) {
    require_domain(t >= 0.0, "phi: negative argument");
    return std::erf(t / std::numbers::sqrt2);
}

inline double phi_inv(double a) {
    require_domain(a > 0.0 && a < 1.0, "phi_inv: argument outside (0,1)");
    if (a > 0.5) return std::numbers::sqrt2 * boost::math::erfc_inv(1.0 - a);
    return std::numbers::sqrt2 * boost::math::erf_inv(a);
}

// sqrt(2 pi) a s e^{s^2/2} with s = psi^{-1}(a)
inline double eta(double a) {
    require_domain(a > 0.0 && a < 1.0, "eta: argument outside (0,1)");
    const double s = psi_inv(a);
    return std::sqrt(2.0 * std::numbers::pi) * a * s * std::exp(0.5 * s * s);
}

inline double normal_pdf(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace gaussconvex::specfun
