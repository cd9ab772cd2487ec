#pragma once

// Gaussian measure and moments of convex bodies in polar form:
//   int_K f dgamma = (2 pi)^{-n/2} oint sum_j a_j(theta) J_{n+j-1}(rho(theta)) dtheta
// for integrands with f(t theta) = sum_j a_j(theta) t^j.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "body.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "specfun.hpp"
#include "sphere.hpp"

namespace gaussconvex::moments {

using body::CVec;
using body::SupportBody;
using body::Vec;

enum class Method { closed, quadrature, monte_carlo };

inline const char* method_name(Method m) {
    switch (m) {
    case Method::closed: return "closed";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct Estimate {
    double value = 0.0;
    double err = 0.0;
    Method method = Method::quadrature;
    std::optional<long> n_samples;
    std::optional<std::uint64_t> seed;
};

// ratio with first-order error propagation
inline Estimate ratio(const Estimate& num, const Estimate& den) {
    Estimate e;
    e.value = num.value / den.value;
    e.err = num.err / std::abs(den.value) + std::abs(num.value) * den.err / (den.value * den.value);
    e.method = num.method;
    return e;
}

// f(t theta) = sum_{j <= degree} a_j(theta) t^j; the coefficient oracle
// also receives rho(theta) so gauge powers can be expressed.
struct RayPolynomial {
    int degree = 0;
    std::function<void(CVec theta, double rho, std::span<double> coeffs)> coeffs;

    static RayPolynomial constant(double c) {
        return {0, [c](CVec, double, std::span<double> a) { a[0] = c; }};
    }
    // |x|^{2q} (pure power t^{2q})
    static RayPolynomial radius_power(int power) {
        return {power, [power](CVec, double, std::span<double> a) {
                    for (auto& v : a) v = 0.0;
                    a[power] = 1.0;
                }};
    }
    // ||x||_K^power = (t / rho)^power
    static RayPolynomial gauge_power(int power) {
        return {power, [power](CVec, double rho, std::span<double> a) {
                    for (auto& v : a) v = 0.0;
                    a[power] = std::isinf(rho) ? 0.0 : std::pow(rho, -power);
                }};
    }
    // <x, dir>^power
    static RayPolynomial direction_power(Vec dir, int power) {
        return {power, [dir = std::move(dir), power](CVec th, double, std::span<double> a) {
                    for (auto& v : a) v = 0.0;
                    a[power] = std::pow(body::dot(dir, th), power);
                }};
    }
};

namespace detail {

inline double j_at(int p, double rho) {
    return std::isinf(rho) ? specfun::c(p) : specfun::j_lower(p, rho);
}

} // namespace detail

// Unnormalized integrals int_K f dgamma for several ray polynomials in one pass.
inline std::vector<Estimate> ray_integrals(const SupportBody& K, const std::vector<RayPolynomial>& fs,
                                           const sphere::Config& cfg = {}) {
    const int n = K.dim();
    const std::size_t m = fs.size();
    int maxdeg = 0;
    for (auto& f : fs) maxdeg = std::max(maxdeg, f.degree);
    std::vector<double> coeff(maxdeg + 1), jv(maxdeg + 1);
    auto integrand = [&](CVec th, double* out) {
        const double rho = K.radial(th);
        for (int j = 0; j <= maxdeg; ++j) jv[j] = detail::j_at(n + j - 1, rho);
        for (std::size_t q = 0; q < m; ++q) {
            const int d = fs[q].degree;
            fs[q].coeffs(th, rho, std::span<double>(coeff.data(), d + 1));
            double s = 0.0;
            for (int j = 0; j <= d; ++j)
                if (coeff[j] != 0.0) s += coeff[j] * jv[j];
            out[q] = s;
        }
    };
    sphere::Result r;
    if (cfg.rule != sphere::Rule::adaptive || K.exact_radial()) {
        r = sphere::integrate(n, m, integrand, cfg, K.natural_scales());
    } else {
        // Minkowski sums round corners into sectors narrower than a GK panel. When such a
        // sector sits on a panel end the Kronrod-Gauss difference never sees it, so run two
        // panel layouts, and a third to break a disagreement.
        auto run = [&](int layout) {
            auto c = cfg;
            c.layout = layout;
            return sphere::integrate(n, m, integrand, c, K.natural_scales());
        };
        auto gap = [&](const sphere::Result& x, const sphere::Result& y) {
            double worst = 0.0;
            for (std::size_t q = 0; q < m; ++q)
                worst = std::max(worst, std::abs(x.value[q] - y.value[q]) /
                                            (x.err[q] + y.err[q] + 1e-15 * std::abs(x.value[q]) + 1e-300));
            return worst;
        };
        auto a = run(1), b = run(0);
        if (gap(a, b) > 1.0) {
            auto c = run(2);
            if (gap(b, c) < gap(a, c)) a = std::move(b);
            b = std::move(c);
        }
        for (std::size_t q = 0; q < m; ++q) a.err[q] += std::abs(a.value[q] - b.value[q]);
        a.converged = a.converged && b.converged;
        r = std::move(a);
    }
    const double norm = std::pow(2.0 * std::numbers::pi, -0.5 * n);
    // radial oracle error: d/drho J_p = g_p(rho), bounded via relative tolerance
    const double rad_tol = K.radial_tolerance();
    std::vector<Estimate> out(m);
    for (std::size_t q = 0; q < m; ++q) {
        out[q].value = norm * r.value[q];
        out[q].err = norm * r.err[q] + rad_tol * std::abs(out[q].value) * 10.0 +
                     4.0 * std::numeric_limits<double>::epsilon() * std::abs(out[q].value);
        out[q].method = cfg.rule == sphere::Rule::monte_carlo ? Method::monte_carlo : Method::quadrature;
        if (cfg.rule == sphere::Rule::monte_carlo) {
            out[q].n_samples = cfg.mc_directions;
            out[q].seed = cfg.seed;
        }
    }
    if (!r.converged) {
        double worst = 0.0;
        for (auto& e : out) worst = std::max(worst, e.err);
        if (worst > 1e-6) throw numerical_failure("ray_integrals: spherical rule did not converge", worst);
    }
    return out;
}

inline Estimate ray_integral(const SupportBody& K, const RayPolynomial& f, const sphere::Config& cfg = {}) {
    return ray_integrals(K, {f}, cfg).front();
}

inline Estimate measure(const SupportBody& K, const sphere::Config& cfg = {}) {
    if (K.is_space()) return Estimate{1.0, 0.0, Method::closed, {}, {}};
    auto e = ray_integral(K, RayPolynomial::constant(1.0), cfg);
    e.value = std::min(e.value, 1.0);
    return e;
}

struct MomentsBundle {
    Estimate a;      // gamma(K)
    Estimate m2;     // E|X|^2
    Estimate m4;     // E|X|^4
    Estimate gK2;    // E||X||_K^2
    Estimate gK1;    // E||X||_K
    Estimate gK4;    // E||X||_K^4
    Estimate var_x2; // Var |X|^2
    Estimate dir2;   // E<X,theta>^2
    Estimate dir1;   // E<X,theta>
    Vec theta;
};

inline MomentsBundle moments_bundle(const SupportBody& K, Vec theta = {}, const sphere::Config& cfg = {}) {
    const int n = K.dim();
    if (theta.empty()) {
        theta.assign(n, 0.0);
        theta[0] = 1.0;
    }
    require_param(static_cast<int>(theta.size()) == n, "moments_bundle: direction dimension mismatch");
    const double tn = body::norm(theta);
    for (auto& v : theta) v /= tn;
    std::vector<RayPolynomial> fs{
        RayPolynomial::constant(1.0),
        RayPolynomial::radius_power(2),
        RayPolynomial::radius_power(4),
        RayPolynomial::gauge_power(2),
        RayPolynomial::gauge_power(1),
        RayPolynomial::gauge_power(4),
        RayPolynomial::direction_power(theta, 2),
        RayPolynomial::direction_power(theta, 1),
    };
    auto I = ray_integrals(K, fs, cfg);
    MomentsBundle b;
    b.theta = theta;
    b.a = I[0];
    b.m2 = ratio(I[1], I[0]);
    b.m4 = ratio(I[2], I[0]);
    b.gK2 = ratio(I[3], I[0]);
    b.gK1 = ratio(I[4], I[0]);
    b.gK4 = ratio(I[5], I[0]);
    b.dir2 = ratio(I[6], I[0]);
    b.dir1 = ratio(I[7], I[0]);
    b.var_x2.value = b.m4.value - b.m2.value * b.m2.value;
    b.var_x2.err = b.m4.err + 2.0 * std::abs(b.m2.value) * b.m2.err;
    return b;
}

// Rotation-invariant probability density proportional to exp(-|x|^p / p).
// The radial mass along a ray has the closed form P(n/p, rho^p/p).
inline Estimate measure_general(const SupportBody& K, double p, const sphere::Config& cfg = {}) {
    require_param(p >= 1.0, "measure_general: p must be at least 1");
    if (K.is_space()) return Estimate{1.0, 0.0, Method::closed, {}, {}};
    const int n = K.dim();
    const double s = n / p;
    auto integrand = [&](CVec th, double* out) {
        const double rho = K.radial(th);
        out[0] = std::isinf(rho) ? 1.0 : boost::math::gamma_p(s, std::pow(rho, p) / p);
    };
    auto r = sphere::integrate(n, 1, integrand, cfg, K.natural_scales());
    const double A = sphere::area(n);
    Estimate e{r.value[0] / A, r.err[0] / A + K.radial_tolerance() * 10.0, Method::quadrature, {}, {}};
    if (cfg.rule == sphere::Rule::monte_carlo) {
        e.method = Method::monte_carlo;
        e.n_samples = cfg.mc_directions;
        e.seed = cfg.seed;
    }
    return e;
}

// fraction of standard Gaussian samples inside K
inline Estimate mc_measure(const SupportBody& K, long N, std::uint64_t seed) {
    require_param(N >= 1, "mc_measure: need at least one sample");
    const int n = K.dim();
    Estimate e;
    e.method = Method::monte_carlo;
    e.n_samples = N;
    e.seed = seed;
    if (K.is_space()) {
        e.value = 1.0;
        return e;
    }
    const long shard_size = 1L << 16;
    long hits = 0;
    Vec x(n);
    for (long start = 0, shard = 0; start < N; start += shard_size, ++shard) {
        rng::NormalStream gen(seed, static_cast<std::uint64_t>(shard));
        const long stop = std::min(N, start + shard_size);
        for (long i = start; i < stop; ++i) {
            for (int d = 0; d < n; ++d) x[d] = gen.next();
            if (K.gauge(x) <= 1.0) ++hits;
        }
    }
    const double p = static_cast<double>(hits) / N;
    e.value = p;
    e.err = 3.0 * std::sqrt(p * (1.0 - p) / N);
    return e;
}

// gamma_1(K, L) = d/de gamma(K + e L) at 0 from the one-sided second-order
// stencil at h, h/2, h/4. Its error runs in h^2, h^3, ..., so two Richardson
// passes (factors 4 and 8) remove both; the spread between the two first-pass
// values bounds what is left.
struct GammaOneOptions {
    double step_factor = 1e-2; // h = step_factor * inradius(K)
    double tolerance = 1e-5;   // relative; larger error bounds are failures
};

inline Estimate gamma_one(const SupportBody& K, const SupportBody& L, const sphere::Config& cfg = {},
                          const GammaOneOptions& opt = {}) {
    require_param(K.dim() == L.dim(), "gamma_one: dimension mismatch");
    require_param(K.symmetric() && L.symmetric(), "gamma_one: bodies must be symmetric");
    const auto r = K.inradius();
    require_param(r.has_value() && *r > 0.0, "gamma_one: inradius unavailable");
    const double h = opt.step_factor * (std::isinf(*r) ? 1.0 : *r);
    const Estimate g0 = measure(K, cfg);
    // measures at h/4, h/2, h, 2h
    Estimate g[4];
    for (int i = 0; i < 4; ++i) g[i] = measure(body::minkowski_sum(K, L, 0.25 * h * (1 << i)), cfg);
    double d[3], e[3];
    for (int i = 0; i < 3; ++i) {
        const double step = 0.25 * h * (1 << i);
        d[i] = (-3.0 * g0.value + 4.0 * g[i].value - g[i + 1].value) / (2.0 * step);
        e[i] = (3.0 * g0.err + 4.0 * g[i].err + g[i + 1].err) / (2.0 * step);
    }
    // d[0] is the finest step
    const double R1 = (4.0 * d[1] - d[2]) / 3.0, R2 = (4.0 * d[0] - d[1]) / 3.0;
    const double extrap = (8.0 * R2 - R1) / 7.0;
    const double noise = (32.0 * e[0] + 12.0 * e[1] + e[2]) / 21.0;
    Estimate out{extrap, std::abs(R2 - R1) / 7.0 + noise, Method::quadrature, {}, {}};
    if (out.err > opt.tolerance * std::max(1.0, std::abs(extrap)))
        throw numerical_failure("gamma_one: error bound above tolerance", out.err);
    return out;
}

} // namespace gaussconvex::moments
