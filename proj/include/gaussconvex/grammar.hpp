#pragma once

// One-line body descriptions.
//
//   body      = group | interp | translate | "space" | primitive
//   group     = "(" body ")"
//   interp    = "interp:lambda=" number ";" body "|" body
//   translate = "translate:v=" list ";" body
//   primitive = name ":" param { "," param }
//   param     = key "=" ( number | list )
//   list      = "[" number { "," number } "]"
//
//   ball:R=1.5            strip:w=0.7            cylinder:k=2,R=1
//   box:a=[1,0.5]         lp_ball:r=1,p=3        ellipsoid:c=[1,2,0.5]
//
// Primitives take their dimension from the caller unless they carry n=...;
// box and ellipsoid take it from the list length. Whitespace is ignored.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "body.hpp"
#include "poly.hpp"

namespace gaussconvex::grammar {

using body::SupportBody;
using body::Vec;

class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& msg, std::size_t pos)
        : std::invalid_argument("body grammar: " + msg + " at offset " + std::to_string(pos)) {}
};

namespace detail {

class Parser {
public:
    Parser(std::string text, int n) : n_(n) {
        for (char ch : text)
            if (!std::isspace(static_cast<unsigned char>(ch))) s_ += ch;
    }

    SupportBody parse() {
        auto b = body();
        if (pos_ != s_.size()) fail("trailing input");
        return b;
    }

private:
    using Value = std::variant<double, Vec>;

    [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

    bool eat(char ch) {
        if (pos_ < s_.size() && s_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char ch) {
        if (!eat(ch)) fail(std::string("expected '") + ch + "'");
    }
    bool eat_word(const std::string& w) {
        if (s_.compare(pos_, w.size(), w) == 0) {
            pos_ += w.size();
            return true;
        }
        return false;
    }

    std::string ident() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        if (pos_ == start) fail("expected a name");
        return s_.substr(start, pos_ - start);
    }

    double number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    Vec list() {
        expect('[');
        Vec v{number()};
        while (eat(',')) v.push_back(number());
        expect(']');
        return v;
    }

    Value value() {
        if (pos_ < s_.size() && s_[pos_] == '[') return list();
        return number();
    }

    SupportBody body() {
        if (eat('(')) {
            auto b = body();
            expect(')');
            return b;
        }
        if (eat_word("interp:")) {
            if (!eat_word("lambda=")) fail("interp needs lambda=");
            const double lambda = number();
            expect(';');
            auto K = body();
            expect('|');
            auto L = body();
            return body::interpolate(K, L, lambda);
        }
        if (eat_word("translate:")) {
            if (!eat_word("v=")) fail("translate needs v=");
            Vec v = list();
            expect(';');
            auto K = body();
            if (static_cast<int>(v.size()) != K.dim()) fail("translation length does not match the body dimension");
            return body::translate(K, v);
        }
        const std::size_t at = pos_;
        const std::string name = ident();
        if (name == "space") {
            int n = n_;
            if (eat(':')) {
                if (!eat_word("n=")) fail("space only takes n=");
                n = static_cast<int>(number());
            }
            return body::space(n);
        }
        expect(':');
        std::map<std::string, Value> p;
        do {
            const std::string key = ident();
            expect('=');
            if (p.count(key)) fail("repeated parameter " + key);
            p[key] = value();
        } while (eat(','));
        return primitive(name, p, at);
    }

    double scalar(const std::map<std::string, Value>& p, const std::string& key) const {
        auto it = p.find(key);
        if (it == p.end()) fail("missing parameter " + key);
        if (!std::holds_alternative<double>(it->second)) fail("parameter " + key + " must be a number");
        return std::get<double>(it->second);
    }
    Vec vector(const std::map<std::string, Value>& p, const std::string& key) const {
        auto it = p.find(key);
        if (it == p.end()) fail("missing parameter " + key);
        if (!std::holds_alternative<Vec>(it->second)) fail("parameter " + key + " must be a list");
        return std::get<Vec>(it->second);
    }
    static int as_int(double v, const char* what) {
        if (v != std::floor(v)) throw std::invalid_argument(std::string("body grammar: ") + what + " must be an integer");
        return static_cast<int>(v);
    }

    SupportBody primitive(const std::string& name, std::map<std::string, Value> p, std::size_t at) {
        int n = n_;
        const bool explicit_n = p.count("n") > 0;
        if (explicit_n) {
            n = as_int(scalar(p, "n"), "n");
            p.erase("n");
        }
        auto only = [&](std::initializer_list<const char*> keys) {
            for (auto& [k, v] : p) {
                bool known = false;
                for (const char* key : keys) known = known || k == key;
                if (!known) {
                    pos_ = at;
                    fail("unknown parameter " + k + " for " + name);
                }
            }
        };
        if (name == "ball") {
            only({"R"});
            return body::ball(n, scalar(p, "R"));
        }
        if (name == "strip") {
            only({"w"});
            return body::strip(n, scalar(p, "w"));
        }
        if (name == "cylinder") {
            only({"k", "R"});
            return body::cylinder(n, as_int(scalar(p, "k"), "k"), scalar(p, "R"));
        }
        if (name == "lp_ball") {
            only({"r", "p"});
            return body::lp_ball(n, scalar(p, "r"), scalar(p, "p"));
        }
        if (name == "box" || name == "ellipsoid") {
            const char* key = name == "box" ? "a" : "c";
            only({key});
            Vec v = vector(p, key);
            if (explicit_n && static_cast<int>(v.size()) != n) fail("list length does not match n");
            return name == "box" ? body::box(v) : body::ellipsoid(v);
        }
        pos_ = at;
        fail("unknown body " + name);
    }

    std::string s_;
    std::size_t pos_ = 0;
    int n_;
};

} // namespace detail

inline SupportBody parse_body(const std::string& text, int n) {
    require_param(n >= 1, "body grammar: dimension must be positive");
    return detail::Parser(text, n).parse();
}

// Polynomials as sums of terms like 0.5*x1^2*x2 or -3 or x3; coordinates count from 1.
inline poly::MultiPoly parse_poly(const std::string& text, int n) {
    require_param(n >= 1, "polynomial: dimension must be positive");
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) { throw parse_error("polynomial: " + msg, pos); };
    auto integer = [&]() {
        const std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return std::stoi(s.substr(start, pos - start));
    };
    poly::MultiPoly p(n);
    if (s.empty()) fail("empty");
    while (pos < s.size()) {
        double coef = 1.0;
        if (s[pos] == '+' || s[pos] == '-') {
            if (s[pos] == '-') coef = -1.0;
            ++pos;
        } else if (pos != 0) {
            fail("expected '+' or '-'");
        }
        poly::MultiPoly::Exponent e(n, 0);
        bool any = false;
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
            char* end = nullptr;
            coef *= std::strtod(s.c_str() + pos, &end);
            pos = static_cast<std::size_t>(end - s.c_str());
            any = true;
        }
        while (pos < s.size() && (s[pos] == 'x' || s[pos] == '*')) {
            if (s[pos] == '*') {
                ++pos;
                if (pos >= s.size() || s[pos] != 'x') fail("expected a coordinate after '*'");
            }
            ++pos;
            const int i = integer();
            if (i < 1 || i > n) fail("coordinate out of range");
            int power = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                power = integer();
            }
            e[i - 1] += power;
            any = true;
        }
        if (!any) fail("empty term");
        p.add_term(e, coef);
    }
    return p;
}

} // namespace gaussconvex::grammar
