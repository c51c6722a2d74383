#pragma once

#include <stdexcept>
#include <string>

namespace fraclog {

/// Argument outside the documented domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// An iterative method ran out of budget. Carries the best estimate found.
struct ConvergenceError : std::runtime_error {
    double best_estimate;
    double error_estimate;
    ConvergenceError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
};

/// An integral or norm that is infinite for the given input.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fraclog
