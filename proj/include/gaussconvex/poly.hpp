#pragma once

// Multivariate polynomials with real coefficients, and their restriction to
// rays: p(t theta) = sum_j a_j(theta) t^j, which is what the polar moment
// engine integrates.

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gaussmoments.hpp"

namespace gaussconvex::poly {

using body::CVec;
using body::Vec;

// polynomial in one variable, coefficients in increasing degree
struct TPoly {
    std::vector<double> c;

    static TPoly constant(double v) { return {{v}}; }
    static TPoly monomial(int d, double v = 1.0) {
        TPoly p;
        p.c.assign(d + 1, 0.0);
        p.c[d] = v;
        return p;
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    double operator()(double t) const {
        double s = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) s = s * t + c[j];
        return s;
    }
    TPoly derivative() const {
        TPoly d;
        for (std::size_t j = 1; j < c.size(); ++j) d.c.push_back(j * c[j]);
        if (d.c.empty()) d.c.push_back(0.0);
        return d;
    }
    friend TPoly operator+(const TPoly& a, const TPoly& b) {
        TPoly r;
        r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
        for (std::size_t j = 0; j < a.c.size(); ++j) r.c[j] += a.c[j];
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[j] += b.c[j];
        return r;
    }
    friend TPoly operator*(const TPoly& a, const TPoly& b) {
        TPoly r;
        r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend TPoly operator*(double s, TPoly a) {
        for (auto& v : a.c) v *= s;
        return a;
    }
};

class MultiPoly {
public:
    using Exponent = std::vector<int>;

    explicit MultiPoly(int n = 1) : n_(n) { require_param(n >= 1, "poly: dimension must be positive"); }

    static MultiPoly constant(int n, double v) {
        MultiPoly p(n);
        p.add_term(Exponent(n, 0), v);
        return p;
    }
    static MultiPoly coordinate(int n, int i, double v = 1.0) {
        MultiPoly p(n);
        Exponent e(n, 0);
        e.at(i) = 1;
        p.add_term(e, v);
        return p;
    }
    static MultiPoly linear(CVec a) {
        MultiPoly p(static_cast<int>(a.size()));
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != 0.0) p += coordinate(p.n_, static_cast<int>(i), a[i]);
        return p;
    }
    // |x|^2
    static MultiPoly norm2(int n) {
        MultiPoly p(n);
        for (int i = 0; i < n; ++i) {
            Exponent e(n, 0);
            e[i] = 2;
            p.add_term(e, 1.0);
        }
        return p;
    }

    int dim() const { return n_; }
    const std::map<Exponent, double>& terms() const { return terms_; }

    void add_term(const Exponent& e, double v) {
        require_param(static_cast<int>(e.size()) == n_, "poly: exponent length mismatch");
        if (v == 0.0) return;
        auto& slot = terms_[e];
        slot += v;
        if (slot == 0.0) terms_.erase(e);
    }

    int degree() const {
        int d = 0;
        for (auto& [e, v] : terms_) d = std::max(d, total(e));
        return d;
    }
    bool is_even() const {
        for (auto& [e, v] : terms_)
            if (total(e) % 2 != 0) return false;
        return true;
    }

    double operator()(CVec x) const {
        double s = 0.0;
        for (auto& [e, v] : terms_) {
            double m = v;
            for (int i = 0; i < n_; ++i)
                if (e[i]) m *= std::pow(x[i], e[i]);
            s += m;
        }
        return s;
    }

    MultiPoly derivative(int i) const {
        MultiPoly d(n_);
        for (auto& [e, v] : terms_)
            if (e[i] > 0) {
                Exponent f = e;
                f[i] -= 1;
                d.add_term(f, v * e[i]);
            }
        return d;
    }
    std::vector<MultiPoly> gradient() const {
        std::vector<MultiPoly> g;
        for (int i = 0; i < n_; ++i) g.push_back(derivative(i));
        return g;
    }
    MultiPoly laplacian() const {
        MultiPoly s(n_);
        for (int i = 0; i < n_; ++i) s += derivative(i).derivative(i);
        return s;
    }
    // x . grad p multiplies each monomial by its degree
    MultiPoly euler() const {
        MultiPoly s(n_);
        for (auto& [e, v] : terms_) s.add_term(e, v * total(e));
        return s;
    }
    // Gaussian Laplacian L p = Delta p - <x, grad p>
    MultiPoly ou_generator() const { return laplacian() - euler(); }

    // |grad p|^2
    MultiPoly grad_norm2() const {
        MultiPoly s(n_);
        for (auto& d : gradient()) s += d * d;
        return s;
    }
    // ||Hess p||_F^2
    MultiPoly hessian_norm2() const {
        MultiPoly s(n_);
        for (int i = 0; i < n_; ++i) {
            const MultiPoly di = derivative(i);
            for (int j = 0; j < n_; ++j) {
                const MultiPoly h = di.derivative(j);
                s += h * h;
            }
        }
        return s;
    }

    // restriction to the ray t theta
    TPoly along(CVec theta) const {
        TPoly r;
        r.c.assign(degree() + 1, 0.0);
        for (auto& [e, v] : terms_) {
            double m = v;
            for (int i = 0; i < n_; ++i)
                if (e[i]) m *= std::pow(theta[i], e[i]);
            r.c[total(e)] += m;
        }
        return r;
    }

    moments::RayPolynomial to_ray() const {
        const MultiPoly self = *this;
        return {degree(), [self](CVec th, double, std::span<double> a) {
                    const TPoly r = self.along(th);
                    for (std::size_t j = 0; j < a.size(); ++j) a[j] = j < r.c.size() ? r.c[j] : 0.0;
                }};
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        require_param(o.n_ == n_, "poly: dimension mismatch");
        for (auto& [e, v] : o.terms_) add_term(e, v);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator*(double s, const MultiPoly& a) {
        MultiPoly r(a.n_);
        for (auto& [e, v] : a.terms_) r.add_term(e, s * v);
        return r;
    }
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return a + (-1.0) * b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        require_param(a.n_ == b.n_, "poly: dimension mismatch");
        MultiPoly r(a.n_);
        for (auto& [ea, va] : a.terms_)
            for (auto& [eb, vb] : b.terms_) {
                Exponent e(a.n_);
                for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, va * vb);
            }
        return r;
    }

    std::string describe() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [e, v] : terms_) {
            if (!first) os << (v < 0 ? " - " : " + ");
            else if (v < 0) os << "-";
            first = false;
            const double a = std::abs(v);
            bool unit = true;
            for (int k : e) unit = unit && k == 0;
            if (a != 1.0 || unit) os << a;
            for (int i = 0; i < n_; ++i)
                if (e[i]) os << "x" << (i + 1) << (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
        }
        return os.str();
    }

private:
    static int total(const Exponent& e) {
        int s = 0;
        for (int k : e) s += k;
        return s;
    }

    int n_;
    std::map<Exponent, double> terms_;
};

// quadratic form sum_i alpha_i x_i^2
inline MultiPoly diagonal_quadratic(CVec alpha) {
    MultiPoly p(static_cast<int>(alpha.size()));
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        MultiPoly::Exponent e(alpha.size(), 0);
        e[i] = 2;
        p.add_term(e, alpha[i]);
    }
    return p;
}

} // namespace gaussconvex::poly
