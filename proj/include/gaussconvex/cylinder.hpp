#pragma once

// Round k-cylinders R B_2^k x R^{n-k}: radius/measure conversion, perimeter,
// the log-derivative phi_k, the concavity power, and the two Ehrhard-type
// transforms built from them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace gaussconvex::cylinder {

namespace sf = specfun;

inline void check_args(int k, double a) {
    require_domain(k >= 1, "cylinder: k must be at least 1");
    require_domain(a > 0.0 && a < 1.0, "cylinder: measure outside (0,1)");
}

inline double measure_of_radius(int k, double R) {
    require_domain(k >= 1 && R >= 0.0, "cylinder: bad radius");
    return sf::j_lower(k - 1, R) / sf::c(k - 1);
}

inline double radius_of_measure(int k, double a) {
    check_args(k, a);
    return sf::j_inverse_fraction(k - 1, a, 1.0 - a);
}

inline double perimeter_s(int k, double a) {
    const double R = radius_of_measure(k, a);
    return sf::g(k - 1, R) / sf::c(k - 1);
}

inline double phi_k(int k, double a) {
    const double R = radius_of_measure(k, a);
    return sf::c(k - 1) * (R * R - k + 1) / sf::g(k, R);
}

inline double ps_cylinder(int k, double a) {
    const double R = radius_of_measure(k, a);
    const double cc = sf::c(k - 1);
    return 1.0 - cc * a * (k - 1 - R * R) / sf::g(k, R);
}

struct CylinderSpec {
    int n = 1;
    int k = 1;
    double R = 0.0;
    double a = 0.0;

    static CylinderSpec from_radius(int n, int k, double R) {
        require_param(n >= 1 && k >= 1 && k <= n, "cylinder: need 1 <= k <= n");
        require_param(R > 0.0, "cylinder: radius must be positive");
        return {n, k, R, measure_of_radius(k, R)};
    }

    static CylinderSpec from_measure(int n, int k, double a) {
        require_param(n >= 1 && k >= 1 && k <= n, "cylinder: need 1 <= k <= n");
        return {n, k, radius_of_measure(k, a), a};
    }
};

// ---------------------------------------------------------------------------
// partition of (0,1) by the minimisers of phi_k and s_k

struct PartitionRow {
    double a;
    int argmin_phi;
    double min_phi;
    int argmin_s;
    double min_s;
};

struct Crossing {
    double a;
    int i, j; // curves i and j (1-based k) cross here
};

struct PartitionTable {
    int n = 1;
    std::vector<PartitionRow> rows;
    std::vector<Crossing> phi_crossings; // pairwise sign changes of phi_i - phi_j
    std::vector<Crossing> s_crossings;
    std::vector<Crossing> phi_switches; // where argmin phi changes
    std::vector<Crossing> s_switches;
};

namespace detail {

// ties go to the smaller k
template <class Fn>
inline std::pair<int, double> argmin_over_k(int n, double a, Fn&& f) {
    int best = 1;
    double val = f(1, a);
    for (int k = 2; k <= n; ++k) {
        const double v = f(k, a);
        if (v < val) {
            val = v;
            best = k;
        }
    }
    return {best, val};
}

template <class Fn>
inline double bisect_sign(Fn&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

template <class Fn>
inline void pairwise_crossings(int n, const std::vector<double>& grid, Fn&& f,
                               std::vector<Crossing>& out) {
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
            auto diff = [&](double a) { return f(i, a) - f(j, a); };
            double prev = diff(grid.front());
            for (std::size_t q = 1; q < grid.size(); ++q) {
                const double cur = diff(grid[q]);
                if ((prev < 0.0) != (cur < 0.0))
                    out.push_back({bisect_sign(diff, grid[q - 1], grid[q]), i, j});
                prev = cur;
            }
        }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.a < y.a; });
}

template <class Fn>
inline void argmin_switches(int n, const std::vector<double>& grid, Fn&& f,
                            std::vector<Crossing>& out) {
    int prev = argmin_over_k(n, grid.front(), f).first;
    for (std::size_t q = 1; q < grid.size(); ++q) {
        const int cur = argmin_over_k(n, grid[q], f).first;
        if (cur != prev) {
            auto diff = [&](double a) { return f(prev, a) - f(cur, a); };
            out.push_back({bisect_sign(diff, grid[q - 1], grid[q]), prev, cur});
        }
        prev = cur;
    }
}

} // namespace detail

inline PartitionTable partition(int n, const std::vector<double>& a_grid) {
    require_domain(n >= 1, "partition: n must be positive");
    require_domain(a_grid.size() >= 2, "partition: grid needs at least two points");
    for (std::size_t i = 0; i < a_grid.size(); ++i) {
        require_domain(a_grid[i] > 0.0 && a_grid[i] < 1.0, "partition: grid outside (0,1)");
        require_domain(i == 0 || a_grid[i] > a_grid[i - 1], "partition: grid not increasing");
    }
    PartitionTable t;
    t.n = n;
    auto phi = [](int k, double a) { return phi_k(k, a); };
    auto per = [](int k, double a) { return perimeter_s(k, a); };
    for (double a : a_grid) {
        auto [kp, vp] = detail::argmin_over_k(n, a, phi);
        auto [ks, vs] = detail::argmin_over_k(n, a, per);
        t.rows.push_back({a, kp, vp, ks, vs});
    }
    detail::pairwise_crossings(n, a_grid, phi, t.phi_crossings);
    detail::pairwise_crossings(n, a_grid, per, t.s_crossings);
    detail::argmin_switches(n, a_grid, phi, t.phi_switches);
    detail::argmin_switches(n, a_grid, per, t.s_switches);
    return t;
}

// grid uniform in logit(a); reaches far into both tails
inline std::vector<double> logit_grid(int points, double lo = 1e-12, double hi = 1.0 - 1e-12) {
    std::vector<double> g(points);
    const double x0 = std::log(lo / (1.0 - lo)), x1 = std::log(hi / (1.0 - hi));
    for (int i = 0; i < points; ++i) {
        const double x = x0 + (x1 - x0) * i / (points - 1);
        g[i] = 1.0 / (1.0 + std::exp(-x));
    }
    return g;
}

inline std::vector<double> uniform_grid(int points, double lo, double hi) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = lo + (hi - lo) * i / (points - 1);
    return g;
}

// ---------------------------------------------------------------------------
// the conjectured transform F(a) = int_0^a exp(int_{C0}^t min_k phi_k) dt
//
// On a stretch where k is the minimiser, phi_k = (log 1/s_k)' and R_k' = 1/s_k,
// so F is affine in R_k there: F(t) = F(u) + A (R_k(t) - R_k(u)) with
// A = s_k(t) exp(inner(t)) constant on the stretch.

class ConjectureF {
public:
    ConjectureF(int n, double C0 = 0.5) : n_(n), C0_(C0) {
        require_domain(n >= 1, "conjecture_F: n must be positive");
        require_domain(C0 > 0.0 && C0 < 1.0, "conjecture_F: C0 outside (0,1)");
        build();
    }

    int n() const { return n_; }
    double C0() const { return C0_; }

    double operator()(double a) const {
        require_domain(a >= 0.0 && a < 1.0, "conjecture_F: argument outside [0,1)");
        if (a == 0.0) return 0.0;
        const Segment& s = locate(a);
        return s.F_left + s.A * (radius_of_measure(s.k, a) - s.R_left);
    }

    // F'(a) = exp(inner(a)) = A / s_k(a)
    double derivative(double a) const {
        require_domain(a > 0.0 && a < 1.0, "conjecture_F: argument outside (0,1)");
        const Segment& s = locate(a);
        return s.A / perimeter_s(s.k, a);
    }

    // inner(a) = int_{C0}^a min_k phi_k
    double inner(double a) const {
        const Segment& s = locate(a);
        return std::log(s.A / perimeter_s(s.k, a));
    }

    int minimiser(double a) const { return locate(a).k; }

    std::vector<double> switch_points() const {
        std::vector<double> out;
        for (std::size_t i = 1; i < segs_.size(); ++i) out.push_back(segs_[i].left);
        return out;
    }

private:
    struct Segment {
        double left, right;
        int k;
        double A;       // s_k exp(inner) on this stretch
        double F_left;  // F at left end
        double R_left;  // R_k at left end
    };

    const Segment& locate(double a) const {
        auto it = std::upper_bound(segs_.begin(), segs_.end(), a,
                                   [](double x, const Segment& s) { return x < s.right; });
        if (it == segs_.end()) return segs_.back();
        return *it;
    }

    void build() {
        auto phi = [](int k, double a) { return phi_k(k, a); };
        const auto grid = logit_grid(801);
        std::vector<Crossing> sw;
        detail::argmin_switches(n_, grid, phi, sw);
        std::vector<double> edges{0.0};
        std::vector<int> ks{detail::argmin_over_k(n_, grid.front(), phi).first};
        for (auto& c : sw) {
            edges.push_back(c.a);
            ks.push_back(c.j);
        }
        edges.push_back(1.0);
        for (std::size_t i = 0; i < ks.size(); ++i) segs_.push_back({edges[i], edges[i + 1], ks[i], 0, 0, 0});

        // anchor: inner(C0) = 0
        std::size_t home = 0;
        while (home + 1 < segs_.size() && C0_ >= segs_[home].right) ++home;
        segs_[home].A = perimeter_s(segs_[home].k, C0_);
        for (std::size_t i = home + 1; i < segs_.size(); ++i) {
            const double b = segs_[i].left;
            segs_[i].A = segs_[i - 1].A * perimeter_s(segs_[i].k, b) / perimeter_s(segs_[i - 1].k, b);
        }
        for (std::size_t i = home; i-- > 0;) {
            const double b = segs_[i].right;
            segs_[i].A = segs_[i + 1].A * perimeter_s(segs_[i].k, b) / perimeter_s(segs_[i + 1].k, b);
        }
        double F = 0.0;
        for (auto& s : segs_) {
            s.F_left = F;
            s.R_left = s.left == 0.0 ? 0.0 : radius_of_measure(s.k, s.left);
            if (s.right < 1.0) F += s.A * (radius_of_measure(s.k, s.right) - s.R_left);
        }
    }

    int n_;
    double C0_;
    std::vector<Segment> segs_;
};

inline double conjecture_F(int n, double C0, double a) { return ConjectureF(n, C0)(a); }

// ---------------------------------------------------------------------------
// running integral with a cached node table: value(t) = table[i] + int_{x_i}^t f

class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, std::vector<double> nodes, double origin,
                       quad::Tolerance tol)
        : f_(std::move(f)), nodes_(std::move(nodes)), tol_(tol) {
        std::sort(nodes_.begin(), nodes_.end());
        cum_.assign(nodes_.size(), 0.0);
        // cumulative from nodes_[0], then shift so value(origin) = 0
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            auto r = quad::integrate(f_, nodes_[i - 1], nodes_[i], tol_);
            cum_[i] = cum_[i - 1] + r.value;
            err_ += r.err;
            if (!r.converged) converged_ = false;
        }
        const double o = raw(origin);
        for (auto& c : cum_) c -= o;
    }

    double operator()(double t) const { return raw(t); }
    double err() const { return err_; }
    bool converged() const { return converged_; }

private:
    double raw(double t) const {
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
        std::size_t i = (it == nodes_.begin()) ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
        if (i + 1 < nodes_.size() && (t - nodes_[i]) > (nodes_[i + 1] - t)) ++i;
        if (t == nodes_[i]) return cum_[i];
        auto r = quad::integrate(f_, nodes_[i], t, tol_);
        return cum_[i] + r.value;
    }

    std::function<double(double)> f_;
    std::vector<double> nodes_;
    std::vector<double> cum_;
    quad::Tolerance tol_;
    double err_ = 0.0;
    bool converged_ = true;
};

// Nested-quadrature evaluation of the same transform, used as an
// independent route against the closed form above.
class ConjectureFQuadrature {
public:
    ConjectureFQuadrature(int n, double C0 = 0.5) : n_(n), C0_(C0) {
        require_domain(n >= 1, "conjecture_F: n must be positive");
        require_domain(C0 > 0.0 && C0 < 1.0, "conjecture_F: C0 outside (0,1)");
        ConjectureF closed(n, C0);
        switches_ = closed.switch_points();
        std::vector<double> nodes = logit_grid(97, 1e-14, 1.0 - 1e-10);
        for (double s : switches_) nodes.push_back(s);
        nodes.push_back(C0);
        // the singular part -(n-1)/(n s) is integrated exactly
        const double sing = static_cast<double>(n - 1) / n;
        auto regular = [this, sing](double s) {
            return min_phi(s) + sing / s;
        };
        inner_ = std::make_unique<CumulativeIntegral>(regular, nodes, C0, quad::Tolerance{1e-13, 1e-11, 2000});
    }

    double min_phi(double s) const {
        double m = phi_k(1, s);
        for (int k = 2; k <= n_; ++k) m = std::min(m, phi_k(k, s));
        return m;
    }

    double inner(double t) const {
        const double sing = static_cast<double>(n_ - 1) / n_;
        return (*inner_)(t) - sing * std::log(t / C0_);
    }

    quad::Result operator()(double a) const {
        require_domain(a >= 0.0 && a < 1.0, "conjecture_F: argument outside [0,1)");
        if (a == 0.0) return {};
        // t = u^n removes the t^{-(n-1)/n} behaviour at 0
        const double nn = n_;
        auto outer = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double t = std::pow(u, nn);
            return nn * std::pow(u, nn - 1.0) * std::exp(inner(t));
        };
        std::vector<double> brk;
        for (double s : switches_) brk.push_back(std::pow(s, 1.0 / nn));
        auto r = quad::integrate(outer, 0.0, std::pow(a, 1.0 / nn), {1e-14, 1e-10, 2000}, brk);
        if (!r.converged)
            throw numerical_failure("conjecture_F: outer integral unresolved", r.err);
        return r;
    }

private:
    int n_;
    double C0_;
    std::vector<double> switches_;
    std::unique_ptr<CumulativeIntegral> inner_;
};

// ---------------------------------------------------------------------------
// the proven transform. Its inner integrand is
//   phi^{-1}(s)^2/(2 e^2 n^2 s) + c_{n-1}/g_n(R_n(s)) - 1/s,
// using n s - J_{n+1}(R_n(s))/c_{n-1} = g_n(R_n(s))/c_{n-1}.

inline double weak_integrand(int n, double s) {
    require_domain(n >= 1, "weak_F: n must be positive");
    require_domain(s > 0.0 && s < 1.0, "weak_F: argument outside (0,1)");
    const double x = sf::phi_inv(s);
    const double R = radius_of_measure(n, s);
    const double e2 = std::exp(2.0);
    return x * x / (2.0 * e2 * n * n * s) + sf::c(n - 1) / sf::g(n, R) - 1.0 / s;
}

class WeakF {
public:
    WeakF(int n, double C0 = 0.5) : n_(n), C0_(C0) {
        require_domain(n >= 1, "weak_F: n must be positive");
        require_domain(C0 > 0.0 && C0 < 1.0, "weak_F: C0 outside (0,1)");
        const double nn = n;
        // c/g_n(R) - 1/(n s) = J_{n+1}(R) / (n R J_{n-1}(R)) dR-density after s -> R
        auto radial_part = [nn](double r) {
            if (r <= 0.0) return 0.0;
            return sf::j_lower(nn + 1, r) / (nn * r * sf::j_lower(nn - 1, r));
        };
        auto quantile_part = [nn](double x) {
            if (x <= 0.0) return 0.0;
            const double e2 = std::exp(2.0);
            return x * x * 2.0 * sf::normal_pdf(x) / (2.0 * e2 * nn * nn * sf::phi(x));
        };
        const quad::Tolerance tol{1e-14, 1e-12, 2000};
        R0_ = radius_of_measure(n, C0);
        x0_ = sf::phi_inv(C0);
        auto rn = uniform_grid(161, 0.0, 40.0);
        rn.push_back(R0_);
        auto xn = uniform_grid(161, 0.0, 40.0);
        xn.push_back(x0_);
        radial_ = std::make_unique<CumulativeIntegral>(radial_part, rn, R0_, tol);
        quantile_ = std::make_unique<CumulativeIntegral>(quantile_part, xn, x0_, tol);
    }

    double inner(double t) const {
        const double sing = static_cast<double>(n_ - 1) / n_;
        const double R = radius_of_measure(n_, t);
        const double x = sf::phi_inv(t);
        return (*radial_)(R) + (*quantile_)(x) - sing * std::log(t / C0_);
    }

    quad::Result evaluate(double a) const {
        require_domain(a >= 0.0 && a < 1.0, "weak_F: argument outside [0,1)");
        if (a == 0.0) return {};
        const double nn = n_;
        auto outer = [&](double u) {
            if (u <= 0.0) return 0.0;
            const double t = std::pow(u, nn);
            return nn * std::pow(u, nn - 1.0) * std::exp(inner(t));
        };
        auto r = quad::integrate(outer, 0.0, std::pow(a, 1.0 / nn), {1e-14, 1e-11, 2000});
        if (!r.converged) throw numerical_failure("weak_F: outer integral unresolved", r.err);
        return r;
    }

    double operator()(double a) const { return evaluate(a).value; }

private:
    int n_;
    double C0_;
    double R0_ = 0.0, x0_ = 0.0;
    std::unique_ptr<CumulativeIntegral> radial_;
    std::unique_ptr<CumulativeIntegral> quantile_;
};

inline double weak_F(int n, double C0, double a) { return WeakF(n, C0)(a); }

} // namespace gaussconvex::cylinder
