#pragma once

#include <stdexcept>
#include <string>

namespace gaussconvex {

// Raised when a quadrature or root finder cannot reach the requested accuracy.
// `achieved` carries the best error bound that was reached.
class numerical_failure : public std::runtime_error {
public:
    numerical_failure(const std::string& what, double achieved)
        : std::runtime_error(what + " (achieved bound " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

inline void require_domain(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

inline void require_param(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

} // namespace gaussconvex
