#pragma once

// Run configuration for the command-line tool: `key = value` lines, `#`
// comments, blank lines ignored. `body` may repeat; every other key is
// single-valued. Doubles are written with 17 significant digits so that a
// written file reads back to the identical configuration.

#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sphere.hpp"

namespace gaussconvex::config {

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    int n = 2;                       // ambient dimension
    double abs_tol = 1e-12;          // spherical quadrature, absolute
    double rel_tol = 1e-10;          // spherical quadrature, relative
    int max_intervals = 3000;        // adaptive subdivision cap per level
    std::string rule = "adaptive";   // adaptive | fibonacci | monte_carlo
    int fibonacci_points = 8192;
    long mc_directions = 1L << 18;
    long mc_samples = 1000000;       // point samples for Monte-Carlo measures
    std::uint64_t seed = 20240601;   // the only source of randomness
    std::string out_dir = ".";
    std::vector<std::string> bodies; // body grammar strings

    sphere::Config sphere() const {
        sphere::Config c;
        if (rule == "adaptive") c.rule = sphere::Rule::adaptive;
        else if (rule == "fibonacci") c.rule = sphere::Rule::fibonacci;
        else if (rule == "monte_carlo") c.rule = sphere::Rule::monte_carlo;
        else throw config_error("config: unknown rule " + rule);
        c.abs_tol = abs_tol;
        c.rel_tol = rel_tol;
        c.max_intervals = max_intervals;
        c.fibonacci_points = fibonacci_points;
        c.mc_directions = mc_directions;
        c.seed = seed;
        return c;
    }

    bool operator==(const RunConfig&) const = default;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// strings that would not survive a read: comments, line breaks, edge blanks
inline void check_writable(const std::string& key, const std::string& v) {
    if (v.find_first_of("#\n\r") != std::string::npos || (!v.empty() && (v.front() == ' ' || v.back() == ' ')))
        throw config_error("config: value of " + key + " cannot be written: " + v);
}

inline void write(std::ostream& os, const RunConfig& c) {
    check_writable("rule", c.rule);
    check_writable("out_dir", c.out_dir);
    for (const auto& b : c.bodies) check_writable("body", b);
    os << "n = " << c.n << "\n";
    os << "abs_tol = " << format_double(c.abs_tol) << "\n";
    os << "rel_tol = " << format_double(c.rel_tol) << "\n";
    os << "max_intervals = " << c.max_intervals << "\n";
    os << "rule = " << c.rule << "\n";
    os << "fibonacci_points = " << c.fibonacci_points << "\n";
    os << "mc_directions = " << c.mc_directions << "\n";
    os << "mc_samples = " << c.mc_samples << "\n";
    os << "seed = " << c.seed << "\n";
    os << "out_dir = " << c.out_dir << "\n";
    for (const auto& b : c.bodies) os << "body = " << b << "\n";
}

inline std::string to_string(const RunConfig& c) {
    std::ostringstream os;
    write(os, c);
    return os.str();
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    T out{};
    is >> out;
    if (!is || !is.eof()) throw config_error("config: bad value for " + key + ": " + v);
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        throw config_error("config: bad value for " + key + ": " + v);
    }
    if (used != v.size()) throw config_error("config: bad value for " + key + ": " + v);
    return out;
}

} // namespace detail

// Sets one key; used by the file reader and by command-line overrides.
inline void set(RunConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_number;
    if (key == "n") c.n = parse_number<int>(key, value);
    else if (key == "abs_tol") c.abs_tol = detail::parse_double(key, value);
    else if (key == "rel_tol") c.rel_tol = detail::parse_double(key, value);
    else if (key == "max_intervals") c.max_intervals = parse_number<int>(key, value);
    else if (key == "rule") c.rule = value;
    else if (key == "fibonacci_points") c.fibonacci_points = parse_number<int>(key, value);
    else if (key == "mc_directions") c.mc_directions = parse_number<long>(key, value);
    else if (key == "mc_samples") c.mc_samples = parse_number<long>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "out_dir") c.out_dir = value;
    else if (key == "body") c.bodies.push_back(value);
    else throw config_error("config: unknown key " + key);
}

inline RunConfig read(std::istream& is) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) + " has no '='");
        set(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return c;
}

inline RunConfig from_string(const std::string& s) {
    std::istringstream is(s);
    return read(is);
}

inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["abs_tol"] = c.abs_tol;
    j["rel_tol"] = c.rel_tol;
    j["max_intervals"] = c.max_intervals;
    j["rule"] = c.rule;
    j["fibonacci_points"] = c.fibonacci_points;
    j["mc_directions"] = c.mc_directions;
    j["mc_samples"] = c.mc_samples;
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir;
    j["bodies"] = c.bodies;
    return j;
}

} // namespace gaussconvex::config
