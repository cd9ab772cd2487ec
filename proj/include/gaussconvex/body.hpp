#pragma once

// Symmetric convex bodies, possibly unbounded, given by support functions.
//
// A body K in R^n is stored as K_V x R^{free}: V is the set of coordinates in
// which K is bounded and K_V is a bounded symmetric body in R^{|V|} (the core).
// Support values are +inf for directions with a component outside V.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gaussconvex::body {

using Vec = std::vector<double>;
using CVec = std::span<const double>;

inline constexpr double inf = std::numeric_limits<double>::infinity();

inline double dot(CVec a, CVec b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(CVec a) { return std::sqrt(dot(a, a)); }

enum class Shape { ball, box, lp, ellipsoid, sum };

inline const char* shape_name(Shape s) {
    switch (s) {
    case Shape::ball: return "ball";
    case Shape::box: return "box";
    case Shape::lp: return "lp";
    case Shape::ellipsoid: return "ellipsoid";
    case Shape::sum: return "sum";
    }
    return "?";
}

namespace detail {

// golden-section search for the minimum of a unimodal f on [lo, hi]
template <class F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// orthonormal basis of the complement of unit vector t
inline std::vector<Vec> complement_basis(CVec t) {
    const std::size_t m = t.size();
    std::vector<Vec> basis;
    std::vector<Vec> cand;
    for (std::size_t i = 0; i < m; ++i) {
        Vec e(m, 0.0);
        e[i] = 1.0;
        cand.push_back(e);
    }
    // start from the axes least aligned with t
    std::sort(cand.begin(), cand.end(), [&](const Vec& a, const Vec& b) {
        return std::abs(dot(a, t)) < std::abs(dot(b, t));
    });
    for (auto& e : cand) {
        Vec v = e;
        const double pt = dot(v, t);
        for (std::size_t i = 0; i < m; ++i) v[i] -= pt * t[i];
        for (auto& b : basis) {
            const double pb = dot(v, b);
            for (std::size_t i = 0; i < m; ++i) v[i] -= pb * b[i];
        }
        const double nv = norm(v);
        if (nv < 1e-8) continue;
        for (auto& x : v) x /= nv;
        basis.push_back(std::move(v));
        if (basis.size() + 1 == m) break;
    }
    return basis;
}

} // namespace detail

// Bounded symmetric convex body in R^m.
class Core {
public:
    using Ptr = std::shared_ptr<const Core>;
    using Term = std::pair<double, Ptr>;

    static Ptr ball(int m, double R) {
        require_param(m >= 1, "ball: dimension must be positive");
        require_param(R > 0.0 && std::isfinite(R), "ball: radius must be positive");
        auto c = std::make_shared<Core>(Shape::ball, m);
        c->radius_ = R;
        return c;
    }

    static Ptr box(Vec half_widths) {
        require_param(!half_widths.empty(), "box: no sides");
        for (double a : half_widths) require_param(a > 0.0 && std::isfinite(a), "box: half-widths must be positive");
        if (half_widths.size() == 1) return ball(1, half_widths[0]);
        auto c = std::make_shared<Core>(Shape::box, static_cast<int>(half_widths.size()));
        c->axes_ = std::move(half_widths);
        return c;
    }

    static Ptr lp(int m, double r, double p) {
        require_param(m >= 1, "lp_ball: dimension must be positive");
        require_param(r > 0.0 && std::isfinite(r), "lp_ball: radius must be positive");
        require_param(p >= 1.0, "lp_ball: p must be at least 1");
        if (m == 1 || p == 2.0) return ball(m, r);
        if (std::isinf(p)) return box(Vec(m, r));
        auto c = std::make_shared<Core>(Shape::lp, m);
        c->radius_ = r;
        c->p_ = p;
        return c;
    }

    static Ptr ellipsoid(Vec semi_axes) {
        require_param(!semi_axes.empty(), "ellipsoid: no axes");
        for (double a : semi_axes) require_param(a > 0.0 && std::isfinite(a), "ellipsoid: semi-axes must be positive");
        const bool round = std::all_of(semi_axes.begin(), semi_axes.end(),
                                       [&](double a) { return a == semi_axes[0]; });
        if (round) return ball(static_cast<int>(semi_axes.size()), semi_axes[0]);
        auto c = std::make_shared<Core>(Shape::ellipsoid, static_cast<int>(semi_axes.size()));
        c->axes_ = std::move(semi_axes);
        return c;
    }

    // w1 A + w2 B with closed forms for like shapes
    static Ptr combine(double w1, const Ptr& A, double w2, const Ptr& B) {
        require_param(A->m_ == B->m_, "combine: dimension mismatch");
        require_param(w1 >= 0.0 && w2 >= 0.0 && w1 + w2 > 0.0, "combine: weights must be non-negative");
        if (w2 == 0.0) return A->scaled(w1);
        if (w1 == 0.0) return B->scaled(w2);
        const int m = A->m_;
        if (m == 1) return ball(1, w1 * A->support_unit1() + w2 * B->support_unit1());
        if (A->shape_ == B->shape_) {
            switch (A->shape_) {
            case Shape::ball: return ball(m, w1 * A->radius_ + w2 * B->radius_);
            case Shape::box: {
                Vec ax(m);
                for (int i = 0; i < m; ++i) ax[i] = w1 * A->axes_[i] + w2 * B->axes_[i];
                return box(ax);
            }
            case Shape::lp:
                if (A->p_ == B->p_) return lp(m, w1 * A->radius_ + w2 * B->radius_, A->p_);
                break;
            case Shape::ellipsoid: {
                const double kappa = B->axes_[0] / A->axes_[0];
                bool prop = true;
                for (int i = 0; i < m; ++i)
                    prop = prop && std::abs(B->axes_[i] - kappa * A->axes_[i]) <= 1e-15 * B->axes_[i];
                if (prop) {
                    Vec ax(m);
                    for (int i = 0; i < m; ++i) ax[i] = (w1 + w2 * kappa) * A->axes_[i];
                    return ellipsoid(ax);
                }
                break;
            }
            case Shape::sum: break;
            }
        }
        auto c = std::make_shared<Core>(Shape::sum, m);
        auto add = [&](double w, const Ptr& P) {
            if (P->shape_ == Shape::sum) {
                for (auto& [wi, Pi] : P->terms_) c->terms_.emplace_back(w * wi, Pi);
            } else {
                c->terms_.emplace_back(w, P);
            }
        };
        add(w1, A);
        add(w2, B);
        return c;
    }

    Core(Shape s, int m) : shape_(s), m_(m) {}

    Shape shape() const { return shape_; }
    int dim() const { return m_; }
    double radius() const { return radius_; }
    double p() const { return p_; }
    const Vec& axes() const { return axes_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool exact_radial() const { return shape_ != Shape::sum; }

    // positively homogeneous support function on R^m
    double support(CVec u) const {
        switch (shape_) {
        case Shape::ball: return radius_ * norm(u);
        case Shape::box: {
            double s = 0.0;
            for (int i = 0; i < m_; ++i) s += axes_[i] * std::abs(u[i]);
            return s;
        }
        case Shape::lp: {
            const double q = p_ == 1.0 ? inf : p_ / (p_ - 1.0);
            return radius_ * pnorm(u, q);
        }
        case Shape::ellipsoid: {
            double s = 0.0;
            for (int i = 0; i < m_; ++i) s += axes_[i] * axes_[i] * u[i] * u[i];
            return std::sqrt(s);
        }
        case Shape::sum: {
            double s = 0.0;
            for (auto& [w, P] : terms_) s += w * P->support(u);
            return s;
        }
        }
        return inf;
    }

    // Minkowski functional, homogeneous on R^m
    double gauge(CVec x) const {
        switch (shape_) {
        case Shape::ball: return norm(x) / radius_;
        case Shape::box: {
            double g = 0.0;
            for (int i = 0; i < m_; ++i) g = std::max(g, std::abs(x[i]) / axes_[i]);
            return g;
        }
        case Shape::lp: return pnorm(x, p_) / radius_;
        case Shape::ellipsoid: {
            double s = 0.0;
            for (int i = 0; i < m_; ++i) s += x[i] * x[i] / (axes_[i] * axes_[i]);
            return std::sqrt(s);
        }
        case Shape::sum: {
            const double r = norm(x);
            if (r == 0.0) return 0.0;
            Vec t(x.begin(), x.end());
            for (auto& v : t) v /= r;
            return r / radial(t);
        }
        }
        return inf;
    }

    // radial function at a unit vector; for sums this is
    // min over y in t^perp of h(t + y), a convex problem
    double radial(CVec t) const {
        if (shape_ != Shape::sum) return 1.0 / gauge(t);
        if (m_ == 1) return support(t) / std::abs(t[0]);
        if (double r = ball_offset_radial(t); r > 0.0) return r;
        const auto basis = detail::complement_basis(t);
        Vec v(m_);
        std::vector<double> y(basis.size(), 0.0);
        auto value = [&]() {
            for (int i = 0; i < m_; ++i) {
                v[i] = t[i];
                for (std::size_t b = 0; b < basis.size(); ++b) v[i] += y[b] * basis[b][i];
            }
            return support(v);
        };
        // nested search: level b minimises over y[b] with deeper coordinates optimised
        std::function<double(std::size_t)> solve = [&](std::size_t b) -> double {
            if (b == basis.size()) return value();
            auto f = [&](double ang) {
                y[b] = std::tan(ang);
                return solve(b + 1);
            };
            const double half = 0.5 * std::numbers::pi;
            auto [ang, best] = detail::golden_min(f, -half, half, radial_xtol);
            y[b] = std::tan(ang);
            return solve(b + 1);
        };
        return solve(0);
    }

    double inradius() const {
        switch (shape_) {
        case Shape::ball: return radius_;
        case Shape::box:
        case Shape::ellipsoid: return *std::min_element(axes_.begin(), axes_.end());
        case Shape::lp:
            return p_ >= 2.0 ? radius_ : radius_ * std::pow(static_cast<double>(m_), 0.5 - 1.0 / p_);
        case Shape::sum: return min_support_search();
        }
        return 0.0;
    }

    // support along the first axis; equals the half-length for m = 1
    double support_unit1() const {
        Vec e(m_, 0.0);
        e[0] = 1.0;
        return support(e);
    }

    // orthogonal projection onto the listed coordinates
    Ptr project(const std::vector<int>& keep) const {
        require_param(!keep.empty(), "project: empty coordinate set");
        if (static_cast<int>(keep.size()) == m_) {
            bool same = true;
            for (int i = 0; i < m_; ++i) same = same && keep[i] == i;
            if (same) return std::make_shared<Core>(*this);
        }
        const int k = static_cast<int>(keep.size());
        if (k == 1) {
            Vec e(m_, 0.0);
            e[keep[0]] = 1.0;
            return ball(1, support(e));
        }
        switch (shape_) {
        case Shape::ball: return ball(k, radius_);
        case Shape::lp: return lp(k, radius_, p_);
        case Shape::box:
        case Shape::ellipsoid: {
            Vec ax;
            for (int i : keep) ax.push_back(axes_[i]);
            return shape_ == Shape::box ? box(ax) : ellipsoid(ax);
        }
        case Shape::sum: {
            Ptr acc;
            double wacc = 0.0;
            for (auto& [w, P] : terms_) {
                auto Q = P->project(keep);
                if (!acc) {
                    acc = Q;
                    wacc = w;
                } else {
                    acc = combine(wacc, acc, w, Q);
                    wacc = 1.0;
                }
            }
            return wacc == 1.0 ? acc : acc->scaled(wacc);
        }
        }
        return nullptr;
    }

    Ptr scaled(double s) const {
        require_param(s > 0.0, "scale must be positive");
        auto c = std::make_shared<Core>(*this);
        c->radius_ *= s;
        for (auto& a : c->axes_) a *= s;
        for (auto& t : c->terms_) t.first *= s;
        return c;
    }

    std::string describe() const {
        std::ostringstream os;
        os << shape_name(shape_) << "(m=" << m_;
        if (shape_ == Shape::ball || shape_ == Shape::lp) os << ",r=" << radius_;
        if (shape_ == Shape::lp) os << ",p=" << p_;
        if (!axes_.empty()) {
            os << ",axes=[";
            for (std::size_t i = 0; i < axes_.size(); ++i) os << (i ? "," : "") << axes_[i];
            os << "]";
        }
        for (auto& [w, P] : terms_) os << "," << w << "*" << P->describe();
        os << ")";
        return os.str();
    }

    static constexpr double radial_xtol = 1e-12;

private:
    static double pnorm(CVec x, double q) {
        if (std::isinf(q)) {
            double g = 0.0;
            for (double v : x) g = std::max(g, std::abs(v));
            return g;
        }
        double big = 0.0;
        for (double v : x) big = std::max(big, std::abs(v));
        if (big == 0.0) return 0.0;
        double s = 0.0;
        for (double v : x) s += std::pow(std::abs(v) / big, q);
        return big * std::pow(s, 1.0 / q);
    }

    // nearest point of this (non-sum) core to x; false when no cheap projection exists
    bool project_point(CVec x, Vec& out) const {
        out.assign(x.begin(), x.end());
        switch (shape_) {
        case Shape::ball: {
            const double r = norm(x);
            if (r > radius_)
                for (auto& v : out) v *= radius_ / r;
            return true;
        }
        case Shape::box:
            for (int i = 0; i < m_; ++i) out[i] = std::clamp(x[i], -axes_[i], axes_[i]);
            return true;
        case Shape::ellipsoid: {
            if (gauge(x) <= 1.0) return true;
            // y_i = x_i c_i^2 / (c_i^2 + lam), with lam the root of a convex decreasing function
            auto g = [&](double lam, double& dg) {
                double s = 0.0;
                dg = 0.0;
                for (int i = 0; i < m_; ++i) {
                    const double c2 = axes_[i] * axes_[i], q = x[i] * axes_[i] / (c2 + lam);
                    s += q * q;
                    dg -= 2.0 * q * q / (c2 + lam);
                }
                return s - 1.0;
            };
            double lam = 0.0;
            for (int it = 0; it < 100; ++it) {
                double dg;
                const double val = g(lam, dg);
                const double step = val / dg;
                lam -= step;
                if (std::abs(step) <= 1e-16 * std::max(lam, 1e-300) || val <= 0.0) break;
            }
            for (int i = 0; i < m_; ++i) out[i] = x[i] * axes_[i] * axes_[i] / (axes_[i] * axes_[i] + lam);
            return true;
        }
        default: return false;
        }
    }

    // w_b ball + w B is the set within distance w_b r of w B, so the radial
    // solves dist(t theta, w B) = w_b r; returns 0 when this shortcut does not apply
    double ball_offset_radial(CVec t) const {
        if (terms_.size() != 2) return 0.0;
        int ib = terms_[0].second->shape_ == Shape::ball ? 0 : terms_[1].second->shape_ == Shape::ball ? 1 : -1;
        if (ib < 0) return 0.0;
        const auto& [wb, Bb] = terms_[ib];
        const auto& [w, B] = terms_[1 - ib];
        const double off = wb * Bb->radius_;
        Vec x(m_), y(m_), xs(m_);
        auto dist = [&](double s, double& ds) {
            for (int i = 0; i < m_; ++i) x[i] = s * t[i] / w;
            B->project_point(x, y);
            double d2 = 0.0, dot = 0.0;
            for (int i = 0; i < m_; ++i) {
                const double e = w * (x[i] - y[i]);
                d2 += e * e;
                dot += e * t[i];
            }
            const double d = std::sqrt(d2);
            ds = d > 0.0 ? dot / d : 0.0;
            return d;
        };
        if (!B->project_point(t, xs)) return 0.0;
        const double s0 = w * B->radial(t);
        // dist(s) <= s - s0 and the radial never exceeds h(t); dist is convex
        // and increasing on that bracket, so Newton from the right is monotone
        double lo = s0 + off, hi = support(t), s = hi;
        for (int it = 0; it < 200; ++it) {
            double ds;
            const double f = dist(s, ds) - off;
            if (f > 0.0) hi = s; else lo = s;
            double next = ds > 0.0 ? s - f / ds : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - s) <= 1e-15 * s || hi - lo <= 1e-15 * hi) return next;
            s = next;
        }
        return s;
    }

    // minimum of h over the unit sphere: direction scan, then local golden refinement
    double min_support_search() const {
        std::vector<Vec> dirs;
        if (m_ == 2) {
            const int N = 2048;
            for (int i = 0; i < N; ++i) {
                const double a = std::numbers::pi * i / N;
                dirs.push_back({std::cos(a), std::sin(a)});
            }
        } else {
            const int N = m_ == 3 ? 8192 : 20000;
            const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < N; ++i) {
                Vec d(m_, 0.0);
                if (m_ == 3) {
                    const double z = 1.0 - (2.0 * i + 1.0) / N;
                    const double rr = std::sqrt(1.0 - z * z);
                    d = {rr * std::cos(ga * i), rr * std::sin(ga * i), z};
                } else {
                    // quasi-random points on S^{m-1} from a Halton-like lattice
                    double s2 = 0.0;
                    for (int j = 0; j < m_; ++j) {
                        const double u = std::fmod((i + 0.5) * std::sqrt(2.0 + j) , 1.0);
                        d[j] = std::tan(std::numbers::pi * (u - 0.5));
                        s2 += d[j] * d[j];
                    }
                    for (auto& x : d) x /= std::sqrt(s2);
                }
                dirs.push_back(d);
            }
        }
        std::vector<std::pair<double, std::size_t>> vals;
        for (std::size_t i = 0; i < dirs.size(); ++i) vals.emplace_back(support(dirs[i]), i);
        std::partial_sort(vals.begin(), vals.begin() + std::min<std::size_t>(5, vals.size()), vals.end());
        double best = vals.front().first;
        for (std::size_t s = 0; s < std::min<std::size_t>(5, vals.size()); ++s) {
            Vec u = dirs[vals[s].second];
            double cur = vals[s].first;
            // coordinate sweeps in the tangent plane
            for (int sweep = 0; sweep < 6; ++sweep) {
                const auto basis = detail::complement_basis(u);
                for (auto& b : basis) {
                    auto f = [&](double ang) {
                        Vec w(m_);
                        for (int i = 0; i < m_; ++i) w[i] = std::cos(ang) * u[i] + std::sin(ang) * b[i];
                        return support(w);
                    };
                    const double span = 0.1 / (1 << sweep);
                    auto [ang, val] = detail::golden_min(f, -span, span, 1e-13);
                    if (val < cur) {
                        for (int i = 0; i < m_; ++i) u[i] = std::cos(ang) * u[i] + std::sin(ang) * b[i];
                        cur = val;
                    }
                }
            }
            best = std::min(best, cur);
        }
        return best;
    }

    Shape shape_;
    int m_;
    double radius_ = 0.0;
    double p_ = 2.0;
    Vec axes_;
    std::vector<Term> terms_;
};

class SupportBody {
public:
    SupportBody() = default;

    // K = core x R^{free}, bounded along `bounded` (sorted coordinate indices)
    SupportBody(int n, std::vector<int> bounded, Core::Ptr core, std::string label)
        : n_(n), bounded_(std::move(bounded)), core_(std::move(core)), shift_(n, 0.0),
          label_(std::move(label)) {
        require_param(n >= 1, "body: dimension must be positive");
        require_param(std::is_sorted(bounded_.begin(), bounded_.end()), "body: coordinates must be sorted");
        for (int i : bounded_) require_param(i >= 0 && i < n, "body: coordinate out of range");
        require_param(bounded_.empty() == (core_ == nullptr), "body: core/coordinate mismatch");
        if (core_) require_param(core_->dim() == static_cast<int>(bounded_.size()), "body: core dimension mismatch");
    }

    int dim() const { return n_; }
    const std::vector<int>& bounded() const { return bounded_; }
    const Core::Ptr& core() const { return core_; }
    const Vec& shift() const { return shift_; }
    const std::string& label() const { return label_; }
    bool symmetric() const {
        return std::all_of(shift_.begin(), shift_.end(), [](double v) { return v == 0.0; });
    }
    bool is_space() const { return bounded_.empty(); }
    bool exact_radial() const { return !core_ || core_->exact_radial(); }

    // axis scales for the cube-map spherical rule: box half-widths when the
    // body is a box in every coordinate, ones otherwise
    Vec natural_scales() const {
        Vec s(n_, 1.0);
        if (core_ && core_->shape() == Shape::box && static_cast<int>(bounded_.size()) == n_) s = core_->axes();
        return s;
    }

    // relative accuracy of radial(); zero for closed-form bodies
    double radial_tolerance() const { return exact_radial() ? 0.0 : 1e-10; }

    double support(CVec u) const {
        require_param(static_cast<int>(u.size()) == n_, "support: dimension mismatch");
        Vec pu;
        std::size_t b = 0;
        for (int i = 0; i < n_; ++i) {
            if (b < bounded_.size() && bounded_[b] == i) {
                pu.push_back(u[i]);
                ++b;
            } else if (u[i] != 0.0) {
                return inf;
            }
        }
        return core_->support(pu) + dot(shift_, u);
    }

    double radial(CVec theta) const {
        require_param(static_cast<int>(theta.size()) == n_, "radial: dimension mismatch");
        if (!core_) return inf;
        Vec pt = project(theta);
        const double r = norm(pt);
        if (r == 0.0) return inf;
        if (symmetric()) {
            for (auto& v : pt) v /= r;
            return core_->radial(pt) / r;
        }
        // translated body: largest t with gauge_core(P(t theta - v)) <= 1
        const Vec pv = project(shift_);
        auto excess = [&](double t) {
            Vec x(pt.size());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = t * pt[i] - pv[i];
            return core_->gauge(x) - 1.0;
        };
        require_param(excess(0.0) < 0.0, "radial: origin not interior");
        double lo = 0.0, hi = 1.0;
        while (excess(hi) < 0.0) {
            lo = hi;
            hi *= 2.0;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    double gauge(CVec x) const {
        require_param(static_cast<int>(x.size()) == n_, "gauge: dimension mismatch");
        const double r = norm(x);
        if (r == 0.0) return 0.0;
        if (!core_) return 0.0;
        if (symmetric()) return core_->gauge(project(x));
        Vec t(x.begin(), x.end());
        for (auto& v : t) v /= r;
        return r / radial(t);
    }

    bool contains(CVec x) const { return gauge(x) <= 1.0; }

    std::optional<double> inradius() const {
        if (!symmetric()) return std::nullopt;
        if (!core_) return inf;
        return core_->inradius();
    }

    SupportBody translated(Vec v, std::string label) const {
        require_param(static_cast<int>(v.size()) == n_, "translate: dimension mismatch");
        SupportBody out = *this;
        for (int i = 0; i < n_; ++i) out.shift_[i] += v[i];
        out.label_ = std::move(label);
        if (core_) require_param(out.gauge_of_origin() < 1.0, "translate: origin must stay interior");
        return out;
    }

    SupportBody relabeled(std::string label) const {
        SupportBody out = *this;
        out.label_ = std::move(label);
        return out;
    }

    SupportBody dilated(double s) const {
        require_param(s > 0.0, "dilate: factor must be positive");
        SupportBody out = *this;
        if (core_) out.core_ = core_->scaled(s);
        for (auto& v : out.shift_) v *= s;
        std::ostringstream os;
        os << s << "*" << label_;
        out.label_ = os.str();
        return out;
    }

    // w1 K + w2 L
    static SupportBody sum(double w1, const SupportBody& K, double w2, const SupportBody& L,
                           std::string label) {
        require_param(K.n_ == L.n_, "sum: dimension mismatch");
        require_param(w1 >= 0.0 && w2 >= 0.0 && w1 + w2 > 0.0, "sum: weights must be non-negative");
        if (w2 == 0.0) return K.dilated(w1).relabeled(std::move(label));
        if (w1 == 0.0) return L.dilated(w2).relabeled(std::move(label));
        std::vector<int> common;
        std::set_intersection(K.bounded_.begin(), K.bounded_.end(), L.bounded_.begin(), L.bounded_.end(),
                              std::back_inserter(common));
        Core::Ptr core;
        if (!common.empty())
            core = Core::combine(w1, K.core_->project(positions(K.bounded_, common)), w2,
                                 L.core_->project(positions(L.bounded_, common)));
        SupportBody out(K.n_, common, core, std::move(label));
        for (int i = 0; i < K.n_; ++i) out.shift_[i] = w1 * K.shift_[i] + w2 * L.shift_[i];
        return out;
    }

    std::string describe() const {
        std::ostringstream os;
        os << label_ << " [n=" << n_ << ", bounded={";
        for (std::size_t i = 0; i < bounded_.size(); ++i) os << (i ? "," : "") << bounded_[i];
        os << "}";
        if (core_) os << ", core=" << core_->describe();
        os << "]";
        return os.str();
    }

private:
    Vec project(CVec x) const {
        Vec out;
        out.reserve(bounded_.size());
        for (int i : bounded_) out.push_back(x[i]);
        return out;
    }

    double gauge_of_origin() const {
        Vec pv = project(shift_);
        for (auto& v : pv) v = -v;
        return core_->gauge(pv);
    }

    static std::vector<int> positions(const std::vector<int>& all, const std::vector<int>& sub) {
        std::vector<int> pos;
        for (int s : sub) pos.push_back(static_cast<int>(std::lower_bound(all.begin(), all.end(), s) - all.begin()));
        return pos;
    }

    int n_ = 0;
    std::vector<int> bounded_;
    Core::Ptr core_;
    Vec shift_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// catalog

inline std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

inline SupportBody space(int n) { return SupportBody(n, {}, nullptr, "space"); }

inline SupportBody ball(int n, double R) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return SupportBody(n, all, Core::ball(n, R), "ball(R=" + fmt_num(R) + ")");
}

inline SupportBody strip(int n, double w) {
    return SupportBody(n, {0}, Core::ball(1, w), "strip(w=" + fmt_num(w) + ")");
}

inline SupportBody cylinder(int n, int k, double R) {
    require_param(k >= 1 && k <= n, "cylinder: need 1 <= k <= n");
    std::vector<int> first(k);
    std::iota(first.begin(), first.end(), 0);
    return SupportBody(n, first, Core::ball(k, R), "cylinder(k=" + std::to_string(k) + ",R=" + fmt_num(R) + ")");
}

inline SupportBody box(Vec half_widths) {
    const int n = static_cast<int>(half_widths.size());
    require_param(n >= 1, "box: no sides");
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::string lab = "box(";
    for (int i = 0; i < n; ++i) lab += (i ? "," : "") + fmt_num(half_widths[i]);
    lab += ")";
    return SupportBody(n, all, Core::box(std::move(half_widths)), lab);
}

inline SupportBody lp_ball(int n, double r, double p) {
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    return SupportBody(n, all, Core::lp(n, r, p), "lp_ball(r=" + fmt_num(r) + ",p=" + fmt_num(p) + ")");
}

inline SupportBody ellipsoid(Vec semi_axes) {
    const int n = static_cast<int>(semi_axes.size());
    require_param(n >= 1, "ellipsoid: no axes");
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::string lab = "ellipsoid(";
    for (int i = 0; i < n; ++i) lab += (i ? "," : "") + fmt_num(semi_axes[i]);
    lab += ")";
    return SupportBody(n, all, Core::ellipsoid(std::move(semi_axes)), lab);
}

inline SupportBody translate(const SupportBody& K, Vec v) {
    std::string lab = "translate(" + K.label() + ",v=[";
    for (std::size_t i = 0; i < v.size(); ++i) lab += (i ? "," : "") + fmt_num(v[i]);
    lab += "])";
    return K.translated(std::move(v), lab);
}

inline SupportBody interpolate(const SupportBody& K, const SupportBody& L, double lambda) {
    require_param(K.dim() == L.dim(), "interpolate: dimension mismatch");
    require_param(lambda >= 0.0 && lambda <= 1.0, "interpolate: lambda outside [0,1]");
    const std::string lab = "interp(" + fmt_num(lambda) + ";" + K.label() + "|" + L.label() + ")";
    if (lambda == 0.0) return K.relabeled(lab);
    if (lambda == 1.0) return L.relabeled(lab);
    return SupportBody::sum(1.0 - lambda, K, lambda, L, lab);
}

inline SupportBody minkowski_sum(const SupportBody& K, const SupportBody& L, double eps) {
    return SupportBody::sum(1.0, K, eps, L, K.label() + "+" + fmt_num(eps) + "*" + L.label());
}

} // namespace gaussconvex::body
