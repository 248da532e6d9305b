#pragma once

#include <stdexcept>
#include <string>

namespace spinforce {

// Argument outside the physical domain (non-positive distance, range, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Adaptive quadrature could not reach the requested tolerance. The best
// estimate obtained so far travels with the exception.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

// Least-squares design is singular (e.g. fewer than three distinct phases).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spinforce
