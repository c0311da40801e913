#pragma once

#include <stdexcept>
#include <string>

namespace lrc {

/// Step-size underflow or step budget exhausted.
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, double t_reached)
        : std::runtime_error(what), t_reached(t_reached) {}
    double t_reached;
};

/// The characteristic left the configured magnitude guard (finite escape time).
struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double t_reached)
        : std::runtime_error(what), t_reached(t_reached) {}
    double t_reached;
};

/// A stage or level matrix could not be factored.
struct SingularMatrixError : std::runtime_error {
    SingularMatrixError(const std::string& what, long index = -1)
        : std::runtime_error(what), index(index) {}
    long index;
};

/// An iteration ran out of its budget.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual(last_residual) {}
    double last_residual;
};

}  // namespace lrc
