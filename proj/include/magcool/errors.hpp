#pragma once

#include <stdexcept>
#include <string>

namespace magcool {

/// Broad failure classes; the CLI maps each to an exit code.
enum class ErrorKind {
    Domain,       // invalid input, unknown key, bad bracket
    Instability,  // unstable drift, parametric threshold, runaway heating
    Convergence,  // nonlinear solver or integrator failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

struct BracketError : Error {
    BracketError(const std::string& what, double n_low, double n_high)
        : Error(ErrorKind::Domain, what), n_at_low(n_low), n_at_high(n_high) {}
    double n_at_low;
    double n_at_high;
};

struct InstabilityError : Error {
    explicit InstabilityError(const std::string& what) : Error(ErrorKind::Instability, what) {}
};

/// Cavity parametric gain reaches the loss: 4|eps_a|^2 >= |gamma_a/2 + i Delta_a|^2.
struct ThresholdError : Error {
    explicit ThresholdError(const std::string& what) : Error(ErrorKind::Instability, what) {}
};

/// gamma_c + Gamma_net <= 0: the CM mode heats without bound.
struct RunawayError : Error {
    explicit RunawayError(const std::string& what) : Error(ErrorKind::Instability, what) {}
};

struct SingularityError : Error {
    explicit SingularityError(const std::string& what) : Error(ErrorKind::Instability, what) {}
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(ErrorKind::Convergence, what), final_residual(residual) {}
    double final_residual;
};

struct IntegratorError : Error {
    explicit IntegratorError(const std::string& what) : Error(ErrorKind::Convergence, what) {}
};

}  // namespace magcool
