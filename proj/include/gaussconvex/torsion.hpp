#pragma once

// Gaussian torsional rigidity
//   T^F(K) = sup_v (E F v)^2 / E |grad v|^2,  v = 0 on the boundary,
// with expectations normalized by gamma(K). Exact values on domains where the
// Dirichlet problem reduces to one radial variable, lower bounds elsewhere,
// and a one-dimensional comparison against the Ehrhard rearrangement.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "body.hpp"
#include "cylinder.hpp"
#include "errors.hpp"
#include "gaussmoments.hpp"
#include "poly.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace gaussconvex::torsion {

namespace sf = specfun;
using body::CVec;
using body::SupportBody;
using body::Vec;
using poly::MultiPoly;
using poly::TPoly;

enum class Kind { exact_radial, halfspace, variational_lower, gauge_lower };

inline const char* kind_name(Kind k) {
    switch (k) {
    case Kind::exact_radial: return "exact_radial";
    case Kind::halfspace: return "halfspace";
    case Kind::variational_lower: return "variational_lower";
    case Kind::gauge_lower: return "gauge_lower";
    }
    return "?";
}

struct TorsionResult {
    double value = 0.0;
    double err = 0.0;
    Kind kind = Kind::exact_radial;
    std::string F_label;
    // gauge_lower keeps both candidate bounds; the second applies to F = 1 only
    std::optional<double> last_touch_bound;
    std::optional<double> measure_bound;
};

// Source term depending on the distance to the axis of a round cylinder.
struct RadialSource {
    std::function<double(double)> f;
    std::string label;

    static RadialSource one() {
        return {[](double) { return 1.0; }, "1"};
    }
    // k - s^2, the source whose solution is (R^2 - s^2)/2
    static RadialSource quadratic(int k) {
        return {[k](double s) { return k - s * s; }, std::to_string(k) + "-|x|^2"};
    }
    RadialSource scaled(double c) const {
        auto g = f;
        return {[g, c](double s) { return c * g(s); }, std::to_string(c) + "*(" + label + ")"};
    }
};

// Solution of (u' r^{k-1} e^{-r^2/2})' = r^{k-1} e^{-r^2/2} F on [0, R]:
//   u'(r) = r^{1-k} e^{r^2/2} int_0^r s^{k-1} e^{-s^2/2} F(s) ds,
// and T = J_{k-1}(R)^{-1} int_0^R u'(r)^2 r^{k-1} e^{-r^2/2} dr.
// The ambient dimension n does not enter: free coordinates integrate out.
inline TorsionResult torsion_radial(int k, double R, const RadialSource& F, int n) {
    require_param(k >= 1 && k <= n, "torsion_radial: need 1 <= k <= n");
    require_param(R > 0.0 && std::isfinite(R), "torsion_radial: radius must be positive");
    const double km1 = k - 1;
    const quad::Tolerance inner_tol{1e-300, 1e-13, 2000};
    double inner_rel = 0.0;
    bool inner_ok = true;
    auto inner = [&](double r) {
        auto w = [&](double s) { return std::pow(s, km1) * std::exp(-0.5 * s * s) * F.f(s); };
        auto q = quad::integrate(w, 0.0, r, inner_tol);
        if (!q.converged) inner_ok = false;
        if (q.value != 0.0) inner_rel = std::max(inner_rel, q.err / std::abs(q.value));
        return q.value;
    };
    auto outer = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double I = inner(r);
        // u'^2 r^{k-1} e^{-r^2/2} = r^{1-k} e^{r^2/2} I^2
        return std::pow(r, -km1) * std::exp(0.5 * r * r) * I * I;
    };
    auto q = quad::integrate(outer, 0.0, R, {1e-300, 1e-12, 2000});
    if (!q.converged || !inner_ok) throw numerical_failure("torsion_radial: quadrature unresolved", q.err);
    const double J = sf::j_lower(km1, R);
    TorsionResult out;
    out.value = q.value / J;
    out.err = (q.err + 2.0 * inner_rel * std::abs(q.value)) / J;
    out.kind = Kind::exact_radial;
    out.F_label = F.label;
    return out;
}

// F = 1 on {x_1 <= psi^{-1}(a)}: u'(t) = sqrt(2 pi) psi(t) e^{t^2/2}, so
//   T = a^{-1} sqrt(2 pi) int_{-inf}^{s} psi(t)^2 e^{t^2/2} dt.
// The integral starts at s - 12; below that psi(t) <= pdf(t)/|t| bounds the tail.
inline TorsionResult torsion_halfspace(double a) {
    require_domain(a > 0.0 && a < 1.0, "torsion_halfspace: measure outside (0,1)");
    const double s = sf::psi_inv(a);
    const double L = s - 12.0;
    auto f = [](double t) {
        const double p = sf::psi(t);
        if (p == 0.0) return 0.0;
        return std::exp(2.0 * std::log(p) + 0.5 * t * t);
    };
    auto q = quad::integrate(f, L, s, {1e-300, 1e-13, 2000});
    if (!q.converged) throw numerical_failure("torsion_halfspace: quadrature unresolved", q.err);
    double tail = 0.0;
    if (L < 0.0) tail = sf::psi(L) / (std::sqrt(2.0 * std::numbers::pi) * L * L);
    const double scale = std::sqrt(2.0 * std::numbers::pi) / a;
    TorsionResult out;
    out.value = scale * (q.value + 0.5 * tail);
    out.err = scale * (q.err + 0.5 * tail);
    out.kind = Kind::halfspace;
    out.F_label = "1";
    return out;
}

// (k, R) when K is a centred round cylinder R B^k x R^{n-k} in some coordinates
inline std::optional<std::pair<int, double>> radial_reduction(const SupportBody& K) {
    if (!K.symmetric() || K.is_space()) return std::nullopt;
    const auto& c = K.core();
    if (c->shape() != body::Shape::ball) return std::nullopt;
    return std::make_pair(static_cast<int>(K.bounded().size()), c->radius());
}

namespace detail {

// F (1 - ||x||_K^2) restricted to rays
inline moments::RayPolynomial times_boundary_factor(const MultiPoly& F) {
    return {F.degree() + 2, [F](CVec th, double rho, std::span<double> a) {
                const TPoly f = F.along(th);
                for (auto& v : a) v = 0.0;
                const double inv2 = std::isinf(rho) ? 0.0 : 1.0 / (rho * rho);
                for (std::size_t j = 0; j < f.c.size(); ++j) {
                    a[j] += f.c[j];
                    a[j + 2] -= f.c[j] * inv2;
                }
            }};
}

} // namespace detail

// T^F(K) >= r(K)^2 (E F (1 - ||X||_K^2))^2 / (4 E ||X||_K^2), from the test
// function 1 - ||x||_K^2 and |grad ||x||_K| <= 1/r(K); for F = 1 also
// T(K) >= phi^{-1}(a)^2 / (4 e^2 n^2). The larger bound is returned.
inline TorsionResult torsion_gauge_lower(const SupportBody& K, const MultiPoly& F, const sphere::Config& cfg = {}) {
    require_param(K.symmetric(), "torsion_gauge_lower: body must be symmetric");
    require_param(F.dim() == K.dim(), "torsion_gauge_lower: dimension mismatch");
    require_param(!K.is_space(), "torsion_gauge_lower: body must be bounded in some direction");
    const int n = K.dim();
    const double r = *K.inradius();
    auto I = moments::ray_integrals(
        K, {moments::RayPolynomial::constant(1.0), detail::times_boundary_factor(F), moments::RayPolynomial::gauge_power(2)},
        cfg);
    const auto EF = moments::ratio(I[1], I[0]);
    const auto m = moments::ratio(I[2], I[0]);
    TorsionResult out;
    out.kind = Kind::gauge_lower;
    out.F_label = F.describe();
    const double lt = r * r * EF.value * EF.value / (4.0 * m.value);
    const double lt_err = lt * (2.0 * EF.err / std::abs(EF.value) + m.err / m.value);
    out.last_touch_bound = lt;
    out.value = lt;
    out.err = lt_err;
    bool unit = F.terms().size() == 1 && F.degree() == 0 && F.terms().begin()->second == 1.0;
    if (unit) {
        const double x = sf::phi_inv(std::min(I[0].value, 1.0 - 1e-16));
        const double mb = x * x / (4.0 * std::exp(2.0) * n * n);
        out.measure_bound = mb;
        if (mb > lt) {
            out.value = mb;
            out.err = I[0].err * 1e3 * mb;
        }
    }
    return out;
}

// Rayleigh quotient (E F v)^2 / E |grad v|^2 for v = P(||x||_K) q(x), P(1) = 0.
// Along a ray N = t / rho and grad N(t theta) = grad N(theta), whose radial part
// theta / rho is exact; the tangential part comes from central differences of
// the gauge. Differences at steps h and h/2 bound the discretization error.
struct RayleighOptions {
    TPoly P = TPoly{{1.0, 0.0, -1.0}};
    double step = 1e-5;
};

inline moments::Estimate rayleigh(const SupportBody& K, const MultiPoly& F, const MultiPoly& q,
                                  const sphere::Config& cfg = {}, const RayleighOptions& opt = {}) {
    require_param(F.dim() == K.dim() && q.dim() == K.dim(), "rayleigh: dimension mismatch");
    require_param(std::abs(opt.P(1.0)) < 1e-14, "rayleigh: P must vanish at 1");
    const int n = K.dim();
    const TPoly dP = opt.P.derivative();
    const auto gq = q.gradient();
    const int deg = std::max(F.degree() + q.degree() + opt.P.degree(),
                             2 * (std::max(opt.P.degree() - 1, 0) + q.degree()) + 2 * opt.P.degree());

    auto gradN = [&](CVec th, double rho, double h) {
        Vec G(n, 0.0);
        if (!std::isinf(rho))
            for (int i = 0; i < n; ++i) G[i] = th[i] / rho;
        const auto basis = body::detail::complement_basis(th);
        Vec xp(n), xm(n);
        for (const auto& e : basis) {
            for (int i = 0; i < n; ++i) {
                xp[i] = th[i] + h * e[i];
                xm[i] = th[i] - h * e[i];
            }
            const double d = (K.gauge(xp) - K.gauge(xm)) / (2.0 * h);
            for (int i = 0; i < n; ++i) G[i] += d * e[i];
        }
        return G;
    };
    // P(t/rho) as a polynomial in t
    auto in_t = [](const TPoly& p, double rho) {
        TPoly r = p;
        const double inv = std::isinf(rho) ? 0.0 : 1.0 / rho;
        double f = 1.0;
        for (auto& c : r.c) {
            c *= f;
            f *= inv;
        }
        return r;
    };
    auto grad_sq = [&](CVec th, double rho, double h) {
        const Vec G = gradN(th, rho, h);
        const TPoly Pt = in_t(opt.P, rho), dPt = in_t(dP, rho), qt = q.along(th);
        double G2 = 0.0;
        for (double g : G) G2 += g * g;
        TPoly Gdq{{0.0}}, dq2{{0.0}};
        for (int i = 0; i < n; ++i) {
            const TPoly gi = gq[i].along(th);
            Gdq = Gdq + G[i] * gi;
            dq2 = dq2 + gi * gi;
        }
        const TPoly a = dPt * qt;
        return G2 * (a * a) + 2.0 * (a * Pt * Gdq) + (Pt * Pt) * dq2;
    };
    auto fill = [](const TPoly& p, std::span<double> a) {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = j < p.c.size() ? p.c[j] : 0.0;
    };
    std::vector<moments::RayPolynomial> fs{
        moments::RayPolynomial::constant(1.0),
        {deg, [&](CVec th, double rho, std::span<double> a) { fill(F.along(th) * in_t(opt.P, rho) * q.along(th), a); }},
        {deg, [&](CVec th, double rho, std::span<double> a) { fill(grad_sq(th, rho, opt.step), a); }},
        {deg, [&](CVec th, double rho, std::span<double> a) { fill(grad_sq(th, rho, 0.5 * opt.step), a); }},
    };
    auto I = moments::ray_integrals(K, fs, cfg);
    const auto num = moments::ratio(I[1], I[0]);
    const auto den = moments::ratio(I[3], I[0]);
    const double fd = std::abs(I[3].value - I[2].value) / I[0].value;
    moments::Estimate out;
    out.value = num.value * num.value / den.value;
    out.err = out.value * (2.0 * num.err / std::abs(num.value) + (den.err + fd) / den.value);
    if (fd > 1e-4 * den.value)
        throw numerical_failure("rayleigh: tangential gradient estimate is noisy", fd / den.value);
    return out;
}

// ---------------------------------------------------------------------------
// one-dimensional Talenti comparison

// Decreasing rearrangement of F on an interval with respect to gamma_1,
// tabulated in the measure variable m = psi(y) on [0, a]:
//   F*(y) = fsharp(psi(y)),  int_{-inf}^{y} F* dgamma_1 = cumulative(psi(y)).
class Rearrangement {
public:
    Rearrangement(std::function<double(double)> F, double lo, double hi, int cells = 2048)
        : F_(std::move(F)), lo_(lo), hi_(hi) {
        require_param(hi > lo, "rearrangement: empty interval");
        a_ = sf::psi(hi) - sf::psi(lo);
        build_pieces();
        const int N = 2 * cells;
        vals_.resize(N + 1);
        h_ = a_ / N;
        for (int i = 0; i <= N; ++i) vals_[i] = fsharp_exact(i * h_);
        cum_.assign(cells + 1, 0.0);
        for (int c = 0; c < cells; ++c) {
            const double s = vals_[2 * c] + 4.0 * vals_[2 * c + 1] + vals_[2 * c + 2];
            cum_[c + 1] = cum_[c] + s * h_ / 3.0;
        }
    }

    double measure() const { return a_; }

    // fsharp on the table, cubic Lagrange interpolation between nodes
    double fsharp(double m) const {
        if (constant_) return cval_;
        const int N = static_cast<int>(vals_.size()) - 1;
        const double x = std::clamp(m / h_, 0.0, static_cast<double>(N));
        int i = std::clamp(static_cast<int>(std::floor(x)) - 1, 0, N - 3);
        double s = 0.0;
        for (int j = 0; j < 4; ++j) {
            double l = 1.0;
            for (int k = 0; k < 4; ++k)
                if (k != j) l *= (x - (i + k)) / static_cast<double>(j - k);
            s += l * vals_[i + j];
        }
        return s;
    }

    // int_0^m fsharp
    double cumulative(double m) const {
        if (constant_) return cval_ * m;
        m = std::clamp(m, 0.0, a_);
        const double cell = 2.0 * h_;
        int c = std::min(static_cast<int>(m / cell), static_cast<int>(cum_.size()) - 2);
        const double x0 = c * cell;
        // Simpson on the partial cell with the interpolant
        const double xm = 0.5 * (x0 + m);
        return cum_[c] + (m - x0) / 6.0 * (fsharp(x0) + 4.0 * fsharp(xm) + fsharp(m));
    }

    // gamma_1({x in [lo, hi] : F(x) > tau})
    double distribution(double tau) const {
        double mu = 0.0;
        for (const auto& p : pieces_) {
            const double fa = F_(p.a), fb = F_(p.b);
            if (fa > tau && fb > tau) {
                mu += sf::psi(p.b) - sf::psi(p.a);
            } else if (fa > tau || fb > tau) {
                double l = p.a, r = p.b;
                for (int it = 0; it < 100 && r - l > 1e-15 * (1.0 + std::abs(l)); ++it) {
                    const double mid = 0.5 * (l + r);
                    ((F_(mid) > tau) == (fa > tau) ? l : r) = mid;
                }
                const double x = 0.5 * (l + r);
                mu += (fa > tau) ? sf::psi(x) - sf::psi(p.a) : sf::psi(p.b) - sf::psi(x);
            }
        }
        return mu;
    }

private:
    struct Piece {
        double a, b;
    };

    void build_pieces() {
        const int N = 2000;
        std::vector<double> x(N + 1), f(N + 1);
        for (int i = 0; i <= N; ++i) {
            x[i] = lo_ + (hi_ - lo_) * i / N;
            f[i] = F_(x[i]);
        }
        fmin_ = *std::min_element(f.begin(), f.end());
        fmax_ = *std::max_element(f.begin(), f.end());
        if (fmax_ == fmin_) {
            constant_ = true;
            cval_ = fmax_;
            return;
        }
        std::vector<double> cuts{lo_};
        for (int i = 1; i < N; ++i) {
            const double d1 = f[i] - f[i - 1], d2 = f[i + 1] - f[i];
            if (d1 * d2 < 0.0) {
                const double sgn = d1 > 0.0 ? -1.0 : 1.0;
                auto [xe, fe] = body::detail::golden_min([&](double t) { return sgn * F_(t); }, x[i - 1], x[i + 1], 1e-13);
                cuts.push_back(xe);
                fmax_ = std::max(fmax_, F_(xe));
                fmin_ = std::min(fmin_, F_(xe));
            }
        }
        cuts.push_back(hi_);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) pieces_.push_back({cuts[i], cuts[i + 1]});
    }

    double fsharp_exact(double m) const {
        if (constant_) return cval_;
        double l = fmin_, r = fmax_;
        if (m >= a_) return fmin_;
        if (m <= 0.0) return fmax_;
        for (int it = 0; it < 200 && r - l > 1e-15 * (1.0 + std::abs(r)); ++it) {
            const double mid = 0.5 * (l + r);
            (distribution(mid) > m ? l : r) = mid;
        }
        return 0.5 * (l + r);
    }

    std::function<double(double)> F_;
    double lo_, hi_;
    double a_ = 0.0;
    double h_ = 0.0;
    bool constant_ = false;
    double cval_ = 0.0;
    double fmin_ = 0.0, fmax_ = 0.0;
    std::vector<Piece> pieces_;
    std::vector<double> vals_, cum_;
};

struct TalentiReport {
    double a = 0.0;         // gamma_1(K)
    double s = 0.0;         // boundary of the half-line H_K
    double max_diff = 0.0;  // max over samples of u* - v
    double min_u = 0.0;     // minimum of u on K
    std::vector<double> y, ustar, v;
};

// K = [-w1, w2] (w1 may be +inf for a half-line), L u = -F with u = 0 on the
// boundary of K, compared with L v = -F* on H_K = (-inf, psi^{-1}(gamma_1(K))].
inline TalentiReport talenti_1d(double w1, double w2, const std::function<double(double)>& F, int samples = 120) {
    require_param(std::isfinite(w2), "talenti_1d: right end must be finite");
    require_param(w1 > -w2, "talenti_1d: empty interval");
    const bool half_line = std::isinf(w1);
    const double lo = half_line ? std::min(w2, 0.0) - 14.0 : -w1;
    const double hi = w2;
    const quad::Tolerance tol{1e-300, 1e-13, 4000};

    TalentiReport rep;
    rep.a = sf::psi(hi) - (half_line ? 0.0 : sf::psi(lo));
    rep.s = sf::psi_inv(rep.a);

    const auto nodes = cylinder::uniform_grid(401, lo, hi);
    // G(x) = int_lo^x F e^{-s^2/2}
    cylinder::CumulativeIntegral G([&](double s) { return F(s) * std::exp(-0.5 * s * s); }, nodes, lo, tol);
    double C = 0.0;
    if (!half_line) {
        auto num = quad::integrate([&](double x) { return std::exp(0.5 * x * x) * G(x); }, lo, hi, tol);
        auto den = quad::integrate([](double x) { return std::exp(0.5 * x * x); }, lo, hi, tol);
        C = num.value / den.value;
    }
    // u' = e^{x^2/2} (C - G(x)); u(lo) = 0 on intervals, u(hi) = 0 on half-lines
    auto du = [&](double x) { return std::exp(0.5 * x * x) * (C - G(x)); };
    cylinder::CumulativeIntegral U(du, nodes, half_line ? hi : lo, tol);
    auto u = [&](double x) { return U(x); };

    // maximiser of u: G(x_m) = C
    double xm = lo;
    if (!half_line) {
        double l = lo, r = hi;
        for (int it = 0; it < 200 && r - l > 1e-15; ++it) {
            const double mid = 0.5 * (l + r);
            (G(mid) < C ? l : r) = mid;
        }
        xm = 0.5 * (l + r);
    }

    rep.min_u = std::numeric_limits<double>::infinity();
    for (double x : cylinder::uniform_grid(201, lo, hi)) rep.min_u = std::min(rep.min_u, u(x));

    Rearrangement Fs(F, lo, hi);
    const double rt2pi = std::sqrt(2.0 * std::numbers::pi);
    auto Phi = [&](double t) { return rt2pi * Fs.cumulative(sf::psi(t) - (half_line ? sf::psi(lo) : 0.0)); };
    const double vlo = rep.s - 12.0;
    cylinder::CumulativeIntegral V([&](double t) { return std::exp(0.5 * t * t) * Phi(t); },
                                   cylinder::uniform_grid(241, vlo, rep.s), rep.s, tol);
    auto v = [&](double y) { return -V(y); };

    // level sets {u > u(x)} for x on the decreasing branch
    const double xr_lo = half_line ? std::max(lo + 2.0, rep.s - 8.0) : xm;
    rep.max_diff = -std::numeric_limits<double>::infinity();
    for (int j = 1; j < samples; ++j) {
        const double x = xr_lo + (hi - xr_lo) * j / samples;
        const double tau = u(x);
        double mu;
        if (half_line) {
            mu = sf::psi(x);
        } else {
            double l = lo, r = xm;
            for (int it = 0; it < 200 && r - l > 1e-15; ++it) {
                const double mid = 0.5 * (l + r);
                (u(mid) < tau ? l : r) = mid;
            }
            mu = sf::psi(x) - sf::psi(0.5 * (l + r));
        }
        if (!(mu > 0.0)) continue;
        const double y = sf::psi_inv(std::min(mu, rep.a));
        const double vy = v(y);
        rep.y.push_back(y);
        rep.ustar.push_back(tau);
        rep.v.push_back(vy);
        rep.max_diff = std::max(rep.max_diff, tau - vy);
    }
    return rep;
}

// int_K f g dgamma_1 and int_{H_K} f* g* dgamma_1 on an interval K = [lo, hi]
inline std::pair<double, double> hardy_littlewood_1d(const std::function<double(double)>& f,
                                                     const std::function<double(double)>& g, double lo, double hi) {
    const double rt2pi = std::sqrt(2.0 * std::numbers::pi);
    auto lhs = quad::integrate([&](double x) { return f(x) * g(x) * std::exp(-0.5 * x * x) / rt2pi; }, lo, hi,
                               {1e-300, 1e-12, 4000});
    Rearrangement fs(f, lo, hi), gs(g, lo, hi);
    auto rhs = quad::integrate([&](double m) { return fs.fsharp(m) * gs.fsharp(m); }, 0.0, fs.measure(),
                               {1e-300, 1e-12, 4000});
    return {lhs.value, rhs.value};
}

} // namespace gaussconvex::torsion
