#pragma once

// Numerical verification of concavity statements along Minkowski
// interpolations and of the moment, variance and torsion inequalities.
// Every verdict is tied to an explicit error budget.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "body.hpp"
#include "cylinder.hpp"
#include "errors.hpp"
#include "gaussmoments.hpp"
#include "poly.hpp"
#include "specfun.hpp"
#include "torsion.hpp"

namespace gaussconvex::verify {

namespace sf = specfun;
using body::SupportBody;
using body::Vec;
using moments::Estimate;
using poly::MultiPoly;

// ---------------------------------------------------------------------------
// transforms

// F(a) = R_k(a) + a_k on the stretches where s_k is minimal, glued continuously
// from the left with the first constant equal to zero.
class BadFunc {
public:
    explicit BadFunc(int n) {
        auto per = [](int k, double a) { return cylinder::perimeter_s(k, a); };
        const auto grid = cylinder::logit_grid(801);
        std::vector<cylinder::Crossing> sw;
        cylinder::detail::argmin_switches(n, grid, per, sw);
        segs_.push_back({0.0, cylinder::detail::argmin_over_k(n, grid.front(), per).first, 0.0});
        for (const auto& c : sw) {
            const Seg& prev = segs_.back();
            const double left = cylinder::radius_of_measure(prev.k, c.a) + prev.shift;
            segs_.push_back({c.a, c.j, left - cylinder::radius_of_measure(c.j, c.a)});
        }
    }

    double operator()(double a) const {
        const Seg& s = locate(a);
        return cylinder::radius_of_measure(s.k, a) + s.shift;
    }
    double derivative(double a) const { return 1.0 / cylinder::perimeter_s(locate(a).k, a); }

    std::vector<double> switch_points() const {
        std::vector<double> out;
        for (std::size_t i = 1; i < segs_.size(); ++i) out.push_back(segs_[i].left);
        return out;
    }

private:
    struct Seg {
        double left;
        int k;
        double shift;
    };
    const Seg& locate(double a) const {
        std::size_t i = 0;
        while (i + 1 < segs_.size() && a >= segs_[i + 1].left) ++i;
        return segs_[i];
    }
    std::vector<Seg> segs_;
};

struct Transform {
    std::string id;
    std::function<double(double)> f;
    std::function<double(double)> derivative;
    double rel_err = 1e-14; // evaluation accuracy of f relative to |f|

    static Transform psi_inv() {
        return {"psi_inv", [](double a) { return sf::psi_inv(a); },
                [](double a) { return 1.0 / sf::normal_pdf(sf::psi_inv(a)); }, 1e-14};
    }
    static Transform phi_inv() {
        return {"phi_inv", [](double a) { return sf::phi_inv(a); },
                [](double a) { return 0.5 / sf::normal_pdf(sf::phi_inv(a)); }, 1e-14};
    }
    // (x^p - 1)/p, log x at p = 0
    static Transform power(double p) {
        if (p == 0.0)
            return {"power(0)", [](double a) { return std::log(a); }, [](double a) { return 1.0 / a; }, 1e-15};
        return {"power(" + body::fmt_num(p) + ")", [p](double a) { return std::expm1(p * std::log(a)) / p; },
                [p](double a) { return std::pow(a, p - 1.0); }, 1e-15};
    }
    static Transform conjecture_F(int n, double C0 = 0.5) {
        auto F = std::make_shared<cylinder::ConjectureF>(n, C0);
        return {"conjecture_F", [F](double a) { return (*F)(a); }, [F](double a) { return F->derivative(a); },
                1e-12};
    }
    static Transform weak_F(int n, double C0 = 0.5) {
        auto F = std::make_shared<cylinder::WeakF>(n, C0);
        return {"weak_F", [F](double a) { return (*F)(a); }, [F](double a) { return std::exp(F->inner(a)); },
                1e-10};
    }
    static Transform bad_func(int n) {
        auto F = std::make_shared<BadFunc>(n);
        return {"bad_func", [F](double a) { return (*F)(a); }, [F](double a) { return F->derivative(a); }, 1e-12};
    }
};

// ---------------------------------------------------------------------------
// concavity along K_t = (1-t)K + tL

enum class Verdict { concave_within_tol, violation, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::concave_within_tol: return "concave_within_tol";
    case Verdict::violation: return "violation";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct ConcavityReport {
    std::string transform;
    std::string K, L;
    std::vector<double> t;
    std::vector<Estimate> measures;
    std::vector<double> values;
    std::vector<double> second_diff; // (T_{i-1} - 2T_i + T_{i+1}) / dt^2 at interior points
    std::vector<double> budget;      // matching error budget
    double max_second_diff = -std::numeric_limits<double>::infinity();
    double min_second_diff = std::numeric_limits<double>::infinity();
    double worst_ratio = -std::numeric_limits<double>::infinity(); // max second_diff / budget
    std::optional<std::size_t> witness;                              // interior index of a violation
    bool confirmed = false; // violation reproduced at doubled resolution
    Verdict verdict = Verdict::inconclusive;
};

inline std::vector<double> uniform_t(int points, double lo = 0.0, double hi = 1.0) {
    return cylinder::uniform_grid(points, lo, hi);
}

namespace detail {

inline void check_grid(const std::vector<double>& t) {
    require_param(t.size() >= 3, "concavity: grid needs at least three points");
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < t.size(); ++i)
        require_param(std::abs((t[i] - t[i - 1]) - dt) <= 1e-12 * (1.0 + std::abs(dt)) && dt > 0.0,
                      "concavity: grid must be uniform and increasing");
}

inline std::vector<Estimate> path_measures(const SupportBody& K, const SupportBody& L, const std::vector<double>& t,
                                           const sphere::Config& cfg) {
    std::vector<Estimate> out;
    for (double ti : t) out.push_back(moments::measure(body::interpolate(K, L, ti), cfg));
    return out;
}

struct Second {
    double d, b;
};

inline Second second_difference(const Transform& T, const Estimate& a, const Estimate& b, const Estimate& c,
                                double dt) {
    const double fa = T.f(a.value), fb = T.f(b.value), fc = T.f(c.value);
    const double d = (fa - 2.0 * fb + fc) / (dt * dt);
    double bud = std::abs(T.derivative(a.value)) * a.err + 2.0 * std::abs(T.derivative(b.value)) * b.err +
                 std::abs(T.derivative(c.value)) * c.err;
    bud += T.rel_err * (std::abs(fa) + 2.0 * std::abs(fb) + std::abs(fc));
    return {d, bud / (dt * dt)};
}

// fills values, differences and a provisional verdict from given measures
inline void classify(ConcavityReport& r, const Transform& T) {
    const double dt = r.t[1] - r.t[0];
    r.values.clear();
    r.second_diff.clear();
    r.budget.clear();
    for (const auto& m : r.measures) r.values.push_back(T.f(m.value));
    bool within = true;
    r.witness.reset();
    for (std::size_t i = 1; i + 1 < r.measures.size(); ++i) {
        const auto s = second_difference(T, r.measures[i - 1], r.measures[i], r.measures[i + 1], dt);
        r.second_diff.push_back(s.d);
        r.budget.push_back(s.b);
        r.max_second_diff = std::max(r.max_second_diff, s.d);
        r.min_second_diff = std::min(r.min_second_diff, s.d);
        const double ratio = s.b > 0.0 ? s.d / s.b : (s.d > 0.0 ? std::numeric_limits<double>::infinity() : -1.0);
        if (ratio > r.worst_ratio) {
            r.worst_ratio = ratio;
            if (s.d > 5.0 * s.b) r.witness = i;
        }
        if (s.d > s.b) within = false;
    }
    r.verdict = r.witness ? Verdict::violation : (within ? Verdict::concave_within_tol : Verdict::inconclusive);
}

} // namespace detail

// Verdict is violation only when a second difference exceeds five budgets and
// the excess survives recomputation of the three measures at doubled resolution.
inline ConcavityReport concavity_from_measures(const Transform& T, const SupportBody& K, const SupportBody& L,
                                               const std::vector<double>& t, std::vector<Estimate> measures,
                                               const sphere::Config& cfg) {
    detail::check_grid(t);
    ConcavityReport r;
    r.transform = T.id;
    r.K = K.label();
    r.L = L.label();
    r.t = t;
    r.measures = std::move(measures);
    detail::classify(r, T);
    if (r.witness) {
        const std::size_t i = *r.witness;
        const auto fine = cfg.refined(2);
        std::vector<Estimate> m;
        for (std::size_t j = i - 1; j <= i + 1; ++j) m.push_back(moments::measure(body::interpolate(K, L, t[j]), fine));
        const auto s = detail::second_difference(T, m[0], m[1], m[2], t[1] - t[0]);
        r.confirmed = s.d > 5.0 * s.b && s.d > 0.0;
        if (!r.confirmed) r.verdict = Verdict::inconclusive;
    }
    return r;
}

inline ConcavityReport concavity_check(const Transform& T, const SupportBody& K, const SupportBody& L,
                                       const std::vector<double>& t, const sphere::Config& cfg = {}) {
    require_param(K.dim() == L.dim(), "concavity: dimension mismatch");
    detail::check_grid(t);
    return concavity_from_measures(T, K, L, t, detail::path_measures(K, L, t, cfg), cfg);
}

// ---------------------------------------------------------------------------
// largest p with t -> gamma(K_t)^p concave on the grid

struct MaxPowerResult {
    double p = 0.0;
    double lo = 0.0, hi = 0.0; // final bracket
    bool saturated_high = false; // concave at the top of the search range
    bool saturated_low = false;  // not concave even at the bottom
    std::vector<Estimate> measures;
};

inline bool concave_within_budget(const Transform& T, const std::vector<Estimate>& m, double dt) {
    for (std::size_t i = 1; i + 1 < m.size(); ++i) {
        const auto s = detail::second_difference(T, m[i - 1], m[i], m[i + 1], dt);
        if (s.d > s.b) return false;
    }
    return true;
}

inline MaxPowerResult max_power_from_measures(std::vector<Estimate> m, const std::vector<double>& t,
                                              double lo = -4.0, double hi = 8.0, int iterations = 30) {
    detail::check_grid(t);
    const double dt = t[1] - t[0];
    MaxPowerResult r;
    r.measures = std::move(m);
    auto ok = [&](double p) { return concave_within_budget(Transform::power(p), r.measures, dt); };
    if (ok(hi)) {
        r.p = r.lo = r.hi = hi;
        r.saturated_high = true;
        return r;
    }
    if (!ok(lo)) {
        r.p = r.lo = r.hi = lo;
        r.saturated_low = true;
        return r;
    }
    for (int it = 0; it < iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    r.lo = lo;
    r.hi = hi;
    r.p = 0.5 * (lo + hi);
    return r;
}

inline MaxPowerResult max_power(const SupportBody& K, const SupportBody& L, const std::vector<double>& t,
                                const sphere::Config& cfg = {}) {
    detail::check_grid(t);
    return max_power_from_measures(detail::path_measures(K, L, t, cfg), t);
}

// ---------------------------------------------------------------------------
// lower bound for the concavity power

struct GaussMainBound {
    double bound = 0.0;
    double err = 0.0;
    double alpha_star = 0.0;     // maximiser of the bracket
    double alpha_printed = 0.0;  // the closed form printed alongside the theorem
    double bound_at_printed = 0.0;
    double sweep_max = 0.0;
    bool dominates_sweep = false;
    bool finite = true;
    // inputs
    double r = 0.0, m = 0.0, m4 = 0.0, ex2 = 0.0;
    int n = 0;
};

namespace detail {

// [0.5 r^2/m (alpha(1-m) - (m - m4))^2 - (m4 - m^2)] / (alpha - m)^2 + 1/(n - EX^2)
inline double gm_bracket(double alpha, double r, double m, double m4, double ex2, int n) {
    const double V = m4 - m * m;
    const double e = alpha * (1.0 - m) - (m - m4);
    const double b = alpha - m;
    return (0.5 * r * r / m * e * e - V) / (b * b) + 1.0 / (n - ex2);
}

inline double gm_alpha_star(double r, double m, double m4) {
    const double V = m4 - m * m;
    return m + (2.0 * m - r * r * V) / (r * r * (1.0 - m));
}

inline double gm_sup(double r, double m, double m4, double ex2, int n, bool& finite) {
    const double V = m4 - m * m;
    finite = 0.5 * r * r / m * V < 1.0;
    if (!finite) return std::numeric_limits<double>::infinity();
    return gm_bracket(gm_alpha_star(r, m, m4), r, m, m4, ex2, n);
}

} // namespace detail

inline GaussMainBound gauss_main_bound_from(const moments::MomentsBundle& mb, double r, int n) {
    GaussMainBound g;
    g.n = n;
    g.r = r;
    g.m = mb.gK2.value;
    g.m4 = mb.gK4.value;
    g.ex2 = mb.m2.value;
    g.alpha_star = detail::gm_alpha_star(r, g.m, g.m4);
    g.bound = detail::gm_sup(r, g.m, g.m4, g.ex2, n, g.finite);
    g.alpha_printed = (1.0 + 4.0 * r * r * g.m * (g.m - g.m4)) / (2.0 * r * r * g.m * (1.0 - g.m));
    g.bound_at_printed = detail::gm_bracket(g.alpha_printed, r, g.m, g.m4, g.ex2, n);
    // sensitivity to the moment errors
    bool f;
    const double dm = detail::gm_sup(r, g.m + mb.gK2.err, g.m4, g.ex2, n, f) - g.bound;
    const double dm4 = detail::gm_sup(r, g.m, g.m4 + mb.gK4.err, g.ex2, n, f) - g.bound;
    const double dx = detail::gm_sup(r, g.m, g.m4, g.ex2 + mb.m2.err, n, f) - g.bound;
    g.err = std::abs(dm) + std::abs(dm4) + std::abs(dx) + 1e-14 * std::abs(g.bound);
    // sweep around the maximiser, staying off the pole at alpha = m
    const double scale = std::max(std::abs(g.alpha_star - g.m), 1e-3);
    g.sweep_max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        const double alpha = g.alpha_star + scale * (-5.0 + 10.0 * (i + 0.5) / 100.0);
        if (std::abs(alpha - g.m) < 1e-6 * scale) continue;
        g.sweep_max = std::max(g.sweep_max, detail::gm_bracket(alpha, r, g.m, g.m4, g.ex2, n));
    }
    g.dominates_sweep = g.sweep_max <= g.bound + 1e-9;
    return g;
}

inline GaussMainBound gauss_main_bound(const SupportBody& K, const sphere::Config& cfg = {}) {
    require_param(K.symmetric(), "gauss_main_bound: body must be symmetric");
    require_param(!K.is_space(), "gauss_main_bound: body must be bounded in some direction");
    const auto r = K.inradius();
    require_param(r.has_value(), "gauss_main_bound: inradius unavailable");
    return gauss_main_bound_from(moments::moments_bundle(K, {}, cfg), *r, K.dim());
}

// ---------------------------------------------------------------------------
// 2 T(K) + 1/(n - EX^2)

struct CorT1 {
    double value = 0.0;
    double err = 0.0;
    torsion::TorsionResult torsion;
    double ex2 = 0.0;
};

inline CorT1 corT1_bound(const SupportBody& K, const sphere::Config& cfg = {}) {
    require_param(K.symmetric() && !K.is_space(), "corT1_bound: symmetric body bounded in some direction required");
    const int n = K.dim();
    CorT1 c;
    if (auto red = torsion::radial_reduction(K))
        c.torsion = torsion::torsion_radial(red->first, red->second, torsion::RadialSource::one(), n);
    else
        c.torsion = torsion::torsion_gauge_lower(K, MultiPoly::constant(n, 1.0), cfg);
    const auto m2 = moments::ratio(moments::ray_integral(K, moments::RayPolynomial::radius_power(2), cfg),
                                   moments::measure(K, cfg));
    c.ex2 = m2.value;
    c.value = 2.0 * c.torsion.value + 1.0 / (n - m2.value);
    c.err = 2.0 * c.torsion.err + m2.err / ((n - m2.value) * (n - m2.value));
    return c;
}

// ---------------------------------------------------------------------------
// Minkowski's first inequality

struct MinkowskiFirst {
    Estimate gamma1;
    double gK = 0.0, gL = 0.0, ex2 = 0.0;
    double rhs = 0.0;          // (n - EX^2) gamma(K)^{1-p} gamma(L)^p, p = 1/(n - EX^2)
    double rhs_printed = 0.0;  // (1 - EX^2/n) gamma(K)^{1-p} gamma(L)^p
    double slack = 0.0, slack_printed = 0.0;
    double budget = 0.0;
};

inline MinkowskiFirst minkowski_first_check(const SupportBody& K, const SupportBody& L, const sphere::Config& cfg = {}) {
    require_param(K.dim() == L.dim(), "minkowski_first_check: dimension mismatch");
    const int n = K.dim();
    MinkowskiFirst r;
    r.gamma1 = moments::gamma_one(K, L, cfg);
    const auto mb = moments::moments_bundle(K, {}, cfg);
    const auto gL = moments::measure(L, cfg);
    r.gK = mb.a.value;
    r.gL = gL.value;
    r.ex2 = mb.m2.value;
    const double q = n - r.ex2;
    const double p = 1.0 / q;
    const double core = std::pow(r.gK, 1.0 - p) * std::pow(r.gL, p);
    r.rhs = q * core;
    r.rhs_printed = (q / n) * core;
    r.slack = r.gamma1.value - r.rhs;
    r.slack_printed = r.gamma1.value - r.rhs_printed;
    // d rhs / d EX^2 = -core (1 + p log(gL/gK)) up to the p-dependence of core
    const double d_ex2 = core * (1.0 + std::abs(std::log(r.gL / r.gK)) / q);
    r.budget = r.gamma1.err + d_ex2 * mb.m2.err + q * core * (mb.a.err / r.gK + gL.err / r.gL);
    return r;
}

// ---------------------------------------------------------------------------
// Brascamp-Lieb on convex sets: Var f <= c E|grad f|^2, c = 1, or 1/2 for even f
// on symmetric sets

enum class BLMode { gaussian, gaussian_even_half };

struct BrascampLieb {
    double var = 0.0, grad2 = 0.0, constant = 1.0;
    double slack = 0.0, budget = 0.0;
};

inline BrascampLieb brascamp_lieb_check(const SupportBody& K, const MultiPoly& f, BLMode mode,
                                        const sphere::Config& cfg = {}) {
    require_param(f.dim() == K.dim(), "brascamp_lieb_check: dimension mismatch");
    if (mode == BLMode::gaussian_even_half)
        require_param(f.is_even() && K.symmetric(), "brascamp_lieb_check: half constant needs even f on symmetric K");
    auto I = moments::ray_integrals(
        K, {moments::RayPolynomial::constant(1.0), f.to_ray(), (f * f).to_ray(), f.grad_norm2().to_ray()}, cfg);
    const auto Ef = moments::ratio(I[1], I[0]);
    const auto Ef2 = moments::ratio(I[2], I[0]);
    const auto Eg = moments::ratio(I[3], I[0]);
    BrascampLieb b;
    b.constant = mode == BLMode::gaussian ? 1.0 : 0.5;
    b.var = Ef2.value - Ef.value * Ef.value;
    b.grad2 = Eg.value;
    b.slack = b.constant * b.grad2 - b.var;
    b.budget = Ef2.err + 2.0 * std::abs(Ef.value) * Ef.err + b.constant * Eg.err +
               1e-13 * (std::abs(Ef2.value) + b.grad2);
    return b;
}

// ---------------------------------------------------------------------------
// moment functionals

struct MomentSuite {
    int n = 0;
    moments::MomentsBundle mb;
    double cfm_margin = 0.0;   // (EX^2)^2 + 2 EX^2 - EX^4
    double ex2_margin = 0.0;   // n - EX^2
    double dir2_margin = 0.0;  // 1 - E<X,theta>^2
    std::optional<double> alpha, beta;
    std::optional<double> eta_margin; // 1 - E<X,theta>^2 - eta(a) (E<X,theta>)^2
    double err = 0.0;
};

inline double alpha_of(int n, double m2, double m4) {
    return (n * (n - 1.0) - (2.0 * n + 1.0) * m2 + m4) / ((n - m2) * (n - m2));
}
inline double beta_of(int n, double m2, double m4) {
    return (n * n - 2.0 * (n + 1.0) * m2 + m4) / (2.0 * m2 - (m4 - m2 * m2));
}

inline MomentSuite moment_inequality_suite(const SupportBody& K, Vec theta = {}, const sphere::Config& cfg = {}) {
    MomentSuite s;
    s.n = K.dim();
    s.mb = moments::moments_bundle(K, std::move(theta), cfg);
    const auto& mb = s.mb;
    const double m2 = mb.m2.value, m4 = mb.m4.value;
    s.err = mb.m4.err + (2.0 * m2 + 2.0) * mb.m2.err;
    s.cfm_margin = m2 * m2 + 2.0 * m2 - m4;
    s.ex2_margin = s.n - m2;
    s.dir2_margin = 1.0 - mb.dir2.value;
    if (K.symmetric()) {
        if (!K.is_space()) {
            s.alpha = alpha_of(s.n, m2, m4);
            s.beta = beta_of(s.n, m2, m4);
        }
    } else {
        s.eta_margin = 1.0 - mb.dir2.value - sf::eta(mb.a.value) * mb.dir1.value * mb.dir1.value;
    }
    return s;
}

// alpha of the half-space {x_1 <= psi^{-1}(a)} in one dimension
struct HalfspaceAlpha {
    double quadrature = 0.0; // from E X^2 and E X^4 by 1-D quadrature
    double printed = 0.0;    // -s^3 e^{-s^2/2}
    double minus_eta = 0.0;  // -eta(a)
};

inline HalfspaceAlpha halfspace_alpha(double a) {
    require_domain(a > 0.0 && a < 1.0, "halfspace_alpha: measure outside (0,1)");
    const double s = sf::psi_inv(a);
    auto mom = [&](int q) {
        auto f = [q](double x) { return std::pow(x, q) * sf::normal_pdf(x); };
        return quad::integrate(f, s - 40.0, s, {1e-300, 1e-14, 4000}, {0.0}).value / a;
    };
    HalfspaceAlpha h;
    h.quadrature = alpha_of(1, mom(2), mom(4));
    h.printed = -s * s * s * std::exp(-0.5 * s * s);
    h.minus_eta = -sf::eta(a);
    return h;
}

// ---------------------------------------------------------------------------
// S-inequality: gamma(tK) >= gamma(t S_K) for t >= 1

struct SInequality {
    double width = 0.0; // half-width of the strip of equal measure
    std::vector<double> t, margin, err;
};

inline SInequality s_inequality_check(const SupportBody& K, std::vector<double> ts = {1.0, 1.2, 1.5, 2.0, 3.0},
                                      const sphere::Config& cfg = {}) {
    require_param(K.symmetric(), "s_inequality_check: body must be symmetric");
    const auto a = moments::measure(K, cfg);
    SInequality s;
    s.width = sf::phi_inv(a.value);
    for (double t : ts) {
        require_param(t >= 1.0, "s_inequality_check: t must be at least 1");
        const auto g = t == 1.0 ? a : moments::measure(K.dilated(t), cfg);
        const double strip = sf::phi(t * s.width);
        s.t.push_back(t);
        s.margin.push_back(g.value - strip);
        // the strip inherits the error of gamma(K) through its width
        s.err.push_back(g.err + a.err * t * sf::normal_pdf(t * s.width) / sf::normal_pdf(s.width));
    }
    return s;
}

// ---------------------------------------------------------------------------
// E||Hess u||^2 >= E|grad u|^2 + (E Lu)^2 / (n - EX^2) for even u

struct PropGauss {
    double lhs = 0.0, rhs = 0.0, slack = 0.0, err = 0.0;
};

inline PropGauss propgauss_check(const SupportBody& K, const MultiPoly& u, const sphere::Config& cfg = {}) {
    require_param(u.dim() == K.dim(), "propgauss_check: dimension mismatch");
    require_param(u.is_even(), "propgauss_check: u must be even");
    const int n = K.dim();
    auto I = moments::ray_integrals(K,
                                    {moments::RayPolynomial::constant(1.0), u.hessian_norm2().to_ray(),
                                     u.grad_norm2().to_ray(), u.ou_generator().to_ray(),
                                     moments::RayPolynomial::radius_power(2)},
                                    cfg);
    const auto H = moments::ratio(I[1], I[0]);
    const auto G = moments::ratio(I[2], I[0]);
    const auto Lu = moments::ratio(I[3], I[0]);
    const auto X2 = moments::ratio(I[4], I[0]);
    PropGauss p;
    const double q = n - X2.value;
    p.lhs = H.value;
    p.rhs = G.value + Lu.value * Lu.value / q;
    p.slack = p.lhs - p.rhs;
    p.err = H.err + G.err + 2.0 * std::abs(Lu.value) * Lu.err / q + Lu.value * Lu.value * X2.err / (q * q) +
            1e-13 * (std::abs(p.lhs) + std::abs(p.rhs));
    return p;
}

// ---------------------------------------------------------------------------
// Saint-Venant: T(K) <= T(H) for the half-space H of the same measure.
// Only bodies with an exact torsion (round cylinders and balls) give a
// definite verdict; elsewhere the variational value is a lower bound only.

struct SaintVenant {
    torsion::TorsionResult body, halfspace;
    double measure = 0.0;
    double margin = 0.0; // T(H) - T(K)
    bool definite = false;
};

inline SaintVenant saint_venant_check(const SupportBody& K, const sphere::Config& cfg = {}) {
    require_param(K.symmetric() && !K.is_space(), "saint_venant_check: symmetric body bounded in some direction required");
    const int n = K.dim();
    SaintVenant sv;
    if (auto red = torsion::radial_reduction(K)) {
        sv.body = torsion::torsion_radial(red->first, red->second, torsion::RadialSource::one(), n);
        sv.measure = cylinder::measure_of_radius(red->first, red->second);
        sv.definite = true;
    } else {
        sv.body = torsion::torsion_gauge_lower(K, MultiPoly::constant(n, 1.0), cfg);
        sv.measure = moments::measure(K, cfg).value;
    }
    sv.halfspace = torsion::torsion_halfspace(sv.measure);
    sv.margin = sv.halfspace.value - sv.body.value;
    return sv;
}

// ---------------------------------------------------------------------------
// quadrature against Monte Carlo

struct CrossValidation {
    Estimate quadrature, monte_carlo;
    double diff = 0.0;
    double combined = 0.0; // one standard error of Monte Carlo plus the quadrature bound
};

inline CrossValidation cross_validate(const SupportBody& K, long samples, std::uint64_t seed,
                                      const sphere::Config& cfg = {}) {
    CrossValidation c;
    c.quadrature = moments::measure(K, cfg);
    c.monte_carlo = moments::mc_measure(K, samples, seed);
    c.diff = std::abs(c.quadrature.value - c.monte_carlo.value);
    c.combined = c.quadrature.err + c.monte_carlo.err / 3.0; // mc err is three standard errors
    return c;
}

// ---------------------------------------------------------------------------
// counterexample search over a family of pairs

enum class Family { interval_pairs, strip_ball, ball_ball };

inline const char* family_name(Family f) {
    switch (f) {
    case Family::interval_pairs: return "interval_pairs";
    case Family::strip_ball: return "strip_ball";
    case Family::ball_ball: return "ball_ball";
    }
    return "?";
}

struct SearchReport {
    std::string transform;
    std::string family;
    int n = 0;
    int pairs_tested = 0;
    int points = 0;
    std::optional<ConcavityReport> witness;
    double worst_ratio = -std::numeric_limits<double>::infinity();
};

struct SearchOptions {
    std::vector<double> sizes = {0.05, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6, 2.4};
    int points = 17;
};

inline std::vector<std::pair<SupportBody, SupportBody>> family_pairs(Family f, int n, const std::vector<double>& sizes) {
    std::vector<std::pair<SupportBody, SupportBody>> out;
    for (std::size_t i = 0; i < sizes.size(); ++i)
        for (std::size_t j = 0; j < sizes.size(); ++j) {
            switch (f) {
            case Family::interval_pairs:
                if (i < j) out.emplace_back(body::strip(1, sizes[i]), body::strip(1, sizes[j]));
                break;
            case Family::strip_ball: out.emplace_back(body::strip(n, sizes[i]), body::ball(n, sizes[j])); break;
            case Family::ball_ball:
                if (i < j) out.emplace_back(body::ball(n, sizes[i]), body::ball(n, sizes[j]));
                break;
            }
        }
    return out;
}

inline SearchReport counterexample_search(const Transform& T, Family fam, int n, const SearchOptions& opt = {},
                                          const sphere::Config& cfg = {}) {
    if (fam == Family::interval_pairs) n = 1;
    SearchReport rep;
    rep.transform = T.id;
    rep.family = family_name(fam);
    rep.n = n;
    rep.points = opt.points;
    const auto t = uniform_t(opt.points);
    for (const auto& [K, L] : family_pairs(fam, n, opt.sizes)) {
        auto r = concavity_check(T, K, L, t, cfg);
        ++rep.pairs_tested;
        rep.worst_ratio = std::max(rep.worst_ratio, r.worst_ratio);
        if (r.verdict == Verdict::violation && r.confirmed) {
            rep.witness = std::move(r);
            break;
        }
    }
    return rep;
}

} // namespace gaussconvex::verify
