#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands.
// All components share one set of nodes, so a moment bundle costs a single pass.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "errors.hpp"

namespace gaussconvex::quad {

struct Tolerance {
    double abs = 1e-12;
    double rel = 1e-10;
    int max_intervals = 4000;
    std::size_t active = 0; // leading components that drive refinement; 0 means all
};

struct VecResult {
    std::vector<double> value;
    std::vector<double> err;
    int evaluations = 0;
    bool converged = true;
};

struct Result {
    double value = 0.0;
    double err = 0.0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (and the centre)
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    std::vector<double> value, err;
    double score;
    bool operator<(const Segment& o) const { return score < o.score; }
};

template <class F>
void gk15(F& f, double a, double b, std::size_t m, std::vector<double>& val,
          std::vector<double>& err, std::vector<double>& buf) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<double> gauss(m, 0.0);
    val.assign(m, 0.0);
    for (int i = 0; i < 8; ++i) {
        const int copies = (i == 7) ? 1 : 2;
        for (int s = 0; s < copies; ++s) {
            const double x = (s == 0) ? c + h * kronrod_x[i] : c - h * kronrod_x[i];
            f(x, buf.data());
            for (std::size_t j = 0; j < m; ++j) {
                val[j] += kronrod_w[i] * buf[j];
                if (i % 2 == 1) gauss[j] += gauss_w[i / 2] * buf[j];
            }
        }
    }
    err.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        val[j] *= h;
        gauss[j] *= h;
        err[j] = std::abs(val[j] - gauss[j]);
    }
}

} // namespace detail

// f(x, out) writes m components into out. Breakpoints split [a,b] up front.
template <class F>
VecResult integrate_vec(F&& f, std::size_t m, double a, double b, const Tolerance& tol = {},
                        const std::vector<double>& breakpoints = {}) {
    if (b < a) {
        auto r = integrate_vec(f, m, b, a, tol, breakpoints);
        for (auto& v : r.value) v = -v;
        return r;
    }
    std::vector<double> cuts{a};
    for (double x : breakpoints)
        if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> buf(m);
    VecResult out;
    out.value.assign(m, 0.0);
    out.err.assign(m, 0.0);

    const std::size_t act = (tol.active == 0 || tol.active > m) ? m : tol.active;
    auto score = [&](const std::vector<double>& e, const std::vector<double>& total) {
        double s = 0.0;
        for (std::size_t j = 0; j < act; ++j) {
            const double t = std::max(tol.abs, tol.rel * std::abs(total[j]));
            s = std::max(s, e[j] / t);
        }
        return s;
    };

    std::priority_queue<detail::Segment> heap;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        detail::Segment s{cuts[i], cuts[i + 1], {}, {}, 0.0};
        detail::gk15(f, s.a, s.b, m, s.value, s.err, buf);
        out.evaluations += 15;
        for (std::size_t j = 0; j < m; ++j) {
            out.value[j] += s.value[j];
            out.err[j] += s.err[j];
        }
        heap.push(std::move(s));
    }
    // rescore once totals are known
    {
        std::vector<detail::Segment> all;
        while (!heap.empty()) {
            all.push_back(heap.top());
            heap.pop();
        }
        for (auto& s : all) {
            s.score = score(s.err, out.value);
            heap.push(std::move(s));
        }
    }

    auto done = [&] {
        for (std::size_t j = 0; j < act; ++j)
            if (out.err[j] > std::max(tol.abs, tol.rel * std::abs(out.value[j]))) return false;
        return true;
    };

    int intervals = static_cast<int>(heap.size());
    while (!done()) {
        if (intervals >= tol.max_intervals) {
            out.converged = false;
            break;
        }
        detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            out.converged = false;
            heap.push(std::move(worst));
            break;
        }
        detail::Segment left{worst.a, mid, {}, {}, 0.0}, right{mid, worst.b, {}, {}, 0.0};
        detail::gk15(f, left.a, left.b, m, left.value, left.err, buf);
        detail::gk15(f, right.a, right.b, m, right.value, right.err, buf);
        out.evaluations += 30;
        for (std::size_t j = 0; j < m; ++j) {
            out.value[j] += left.value[j] + right.value[j] - worst.value[j];
            out.err[j] += left.err[j] + right.err[j] - worst.err[j];
        }
        left.score = score(left.err, out.value);
        right.score = score(right.err, out.value);
        heap.push(std::move(left));
        heap.push(std::move(right));
        ++intervals;
    }
    // recompute sums from the leaves to drop accumulated rounding
    std::fill(out.value.begin(), out.value.end(), 0.0);
    std::fill(out.err.begin(), out.err.end(), 0.0);
    while (!heap.empty()) {
        const auto& s = heap.top();
        for (std::size_t j = 0; j < m; ++j) {
            out.value[j] += s.value[j];
            out.err[j] += s.err[j];
        }
        heap.pop();
    }
    return out;
}

template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {},
                 const std::vector<double>& breakpoints = {}) {
    auto wrapped = [&](double x, double* out) { out[0] = f(x); };
    auto r = integrate_vec(wrapped, 1, a, b, tol, breakpoints);
    return {r.value[0], r.err[0], r.evaluations, r.converged};
}

// Same as integrate, but raises numerical_failure when the tolerance is missed.
template <class F>
Result integrate_strict(F&& f, double a, double b, const Tolerance& tol = {},
                        const std::vector<double>& breakpoints = {}, const char* what = "quadrature") {
    auto r = integrate(std::forward<F>(f), a, b, tol, breakpoints);
    if (!r.converged && r.err > std::max(tol.abs, tol.rel * std::abs(r.value)) * 100.0)
        throw numerical_failure(what, r.err);
    return r;
}

} // namespace gaussconvex::quad
