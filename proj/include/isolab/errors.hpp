#ifndef ISOLAB_ERRORS_HPP
#define ISOLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace isolab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-range configuration input.
struct ConfigError : Error {
    using Error::Error;
};

// Adaptive quadrature failed to reach the requested tolerance.
struct QuadratureError : Error {
    QuadratureError(const std::string& msg, double achieved)
        : Error(msg), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

// Newton / root-bracketing failure; carries the last residual.
struct SolverError : Error {
    SolverError(const std::string& msg, double residual = 0.0)
        : Error(msg), last_residual(residual) {}
    double last_residual;
};

// A numerical result violated a contract (e.g. negative defect).
struct ContractError : Error {
    using Error::Error;
};

// Graph perturbation leaves the embedded regime.
struct EmbeddednessError : Error {
    using Error::Error;
};

} // namespace isolab

#endif
