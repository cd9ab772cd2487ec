#pragma once

// Integration of vector-valued functions over the unit sphere S^{n-1}.
//   adaptive    nested adaptive Gauss-Kronrod on the faces of a cube map
//   fibonacci   equal-weight Fibonacci lattice (n = 3 only)
//   monte_carlo uniform random directions from the counter-based stream

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace gaussconvex::sphere {

enum class Rule { adaptive, fibonacci, monte_carlo };

inline const char* rule_name(Rule r) {
    switch (r) {
    case Rule::adaptive: return "adaptive";
    case Rule::fibonacci: return "fibonacci";
    case Rule::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct Config {
    Rule rule = Rule::adaptive;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_intervals = 3000;
    int fibonacci_points = 8192;
    long mc_directions = 1L << 18;
    std::uint64_t seed = 20240601;
    int layout = 0; // adaptive: which initial panel cuts to use (0, 1 or 2), for layout cross-checks

    // a copy with tolerances and point counts scaled for a resolution check
    Config refined(int factor = 2) const {
        Config c = *this;
        c.abs_tol /= 16.0 * factor;
        c.rel_tol /= 16.0 * factor;
        c.max_intervals *= factor;
        c.fibonacci_points *= factor;
        c.mc_directions *= factor;
        return c;
    }
};

struct Result {
    std::vector<double> value;
    std::vector<double> err;
    long evaluations = 0;
    bool converged = true;
    std::string method;
};

inline double area(int n) {
    // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace detail {

// f(theta, out) with theta a unit vector of length n.
//
// Cube-map parametrization: face (i, sign) carries directions proportional to
// d = (scale_0 u_0, ..., sign scale_i, ..., scale_{n-1} u_{n-1}), u in [-1,1]^{n-1},
// with solid-angle density prod(scale) / |d|^n. Choosing the scales equal to a
// box's half-widths puts each facet of that box on its own face.
template <class F>
Result adaptive(int n, std::size_t m, F& f, const Config& cfg, std::vector<double> scales) {
    Result res;
    res.method = "adaptive";
    if (n == 1) {
        std::vector<double> buf(m), tot(m, 0.0);
        for (double s : {1.0, -1.0}) {
            double th[1] = {s};
            f(std::span<const double>(th, 1), buf.data());
            for (std::size_t j = 0; j < m; ++j) tot[j] += buf[j];
        }
        res.value = tot;
        res.err.assign(m, 0.0);
        res.evaluations = 2;
        return res;
    }
    if (scales.empty()) scales.assign(n, 1.0);
    require_param(static_cast<int>(scales.size()) == n, "sphere: scale vector has wrong length");
    double det = 1.0;
    for (double s : scales) {
        require_param(s > 0.0 && std::isfinite(s), "sphere: scales must be positive");
        det *= s;
    }
    const int levels = n - 1;
    std::vector<double> d(n), theta(n), u(levels);
    long evals = 0;
    bool ok = true;
    int face = 0;
    double sign = 1.0;

    auto leaf = [&](double* o) {
        int q = 0;
        for (int c = 0; c < n; ++c) d[c] = (c == face) ? sign * scales[c] : scales[c] * u[q++];
        double r2 = 0.0;
        for (double v : d) r2 += v * v;
        const double r = std::sqrt(r2);
        for (int c = 0; c < n; ++c) theta[c] = d[c] / r;
        f(std::span<const double>(theta.data(), n), o);
        const double w = det / std::pow(r, n);
        for (std::size_t j = 0; j < m; ++j) o[j] *= w;
        ++evals;
    };

    // returns 2m numbers: values then accumulated inner error
    std::function<void(int, double*)> level_integral = [&](int lvl, double* out) {
        const bool last = (lvl == levels - 1);
        auto integrand = [&](double x, double* o) {
            u[lvl] = x;
            if (last) {
                leaf(o);
                for (std::size_t j = 0; j < m; ++j) o[m + j] = 0.0;
                return;
            }
            level_integral(lvl + 1, o);
        };
        // inner errors are carried as passive components, so every level
        // can run at the outer tolerance
        quad::Tolerance tol{cfg.abs_tol, cfg.rel_tol, cfg.max_intervals, m};
        static const std::vector<double> layouts[3] = {
            {0.0}, {-0.6180339887498949, 0.2360679774997897}, {-0.3819660112501051, 0.5278640450004206}};
        const auto& cuts = layouts[std::clamp(cfg.layout, 0, 2)];
        auto r = quad::integrate_vec(integrand, 2 * m, -1.0, 1.0, tol, cuts);
        if (!r.converged) ok = false;
        for (std::size_t j = 0; j < m; ++j) {
            out[j] = r.value[j];
            out[m + j] = r.value[m + j] + r.err[j];
        }
    };

    res.value.assign(m, 0.0);
    res.err.assign(m, 0.0);
    std::vector<double> out(2 * m);
    for (face = 0; face < n; ++face)
        for (double sg : {1.0, -1.0}) {
            sign = sg;
            level_integral(0, out.data());
            for (std::size_t j = 0; j < m; ++j) {
                res.value[j] += out[j];
                res.err[j] += out[m + j];
            }
        }
    res.evaluations = evals;
    res.converged = ok;
    return res;
}

template <class F>
Result fibonacci(int n, std::size_t m, F& f, const Config& cfg) {
    require_param(n == 3, "fibonacci rule is only defined on S^2");
    auto run = [&](int N, std::vector<double>& tot) {
        const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
        std::vector<double> buf(m);
        tot.assign(m, 0.0);
        for (int i = 0; i < N; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / N;
            const double r = std::sqrt(1.0 - z * z);
            double th[3] = {r * std::cos(ga * i), r * std::sin(ga * i), z};
            f(std::span<const double>(th, 3), buf.data());
            for (std::size_t j = 0; j < m; ++j) tot[j] += buf[j];
        }
        for (auto& v : tot) v *= area(3) / N;
    };
    Result res;
    res.method = "fibonacci";
    std::vector<double> full, half;
    run(cfg.fibonacci_points, full);
    run(cfg.fibonacci_points / 2, half);
    res.value = full;
    res.err.resize(m);
    for (std::size_t j = 0; j < m; ++j) res.err[j] = std::abs(full[j] - half[j]);
    res.evaluations = cfg.fibonacci_points + cfg.fibonacci_points / 2;
    return res;
}

template <class F>
Result monte_carlo(int n, std::size_t m, F& f, const Config& cfg) {
    Result res;
    res.method = "monte_carlo";
    const long N = cfg.mc_directions;
    const long shard_size = 1L << 14;
    std::vector<double> sum(m, 0.0), sum2(m, 0.0), buf(m), th(n);
    for (long start = 0, shard = 0; start < N; start += shard_size, ++shard) {
        rng::NormalStream gen(cfg.seed, static_cast<std::uint64_t>(shard));
        const long stop = std::min(N, start + shard_size);
        for (long i = start; i < stop; ++i) {
            double r2 = 0.0;
            for (int d = 0; d < n; ++d) {
                th[d] = gen.next();
                r2 += th[d] * th[d];
            }
            const double r = std::sqrt(r2);
            for (auto& v : th) v /= r;
            f(std::span<const double>(th.data(), n), buf.data());
            for (std::size_t j = 0; j < m; ++j) {
                sum[j] += buf[j];
                sum2[j] += buf[j] * buf[j];
            }
        }
    }
    const double A = area(n);
    res.value.resize(m);
    res.err.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = sum[j] / N;
        const double var = std::max(0.0, sum2[j] / N - mean * mean);
        res.value[j] = A * mean;
        res.err[j] = 3.0 * A * std::sqrt(var / N);
    }
    res.evaluations = N;
    return res;
}

} // namespace detail

template <class F>
Result integrate(int n, std::size_t m, F&& f, const Config& cfg = {}, std::vector<double> scales = {}) {
    require_param(n >= 1, "sphere: dimension must be positive");
    switch (cfg.rule) {
    case Rule::adaptive: return detail::adaptive(n, m, f, cfg, std::move(scales));
    case Rule::fibonacci: return detail::fibonacci(n, m, f, cfg);
    case Rule::monte_carlo: return detail::monte_carlo(n, m, f, cfg);
    }
    return {};
}

} // namespace gaussconvex::sphere
