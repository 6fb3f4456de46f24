#pragma once

#include <stdexcept>
#include <string>

namespace mixrisk {

// Error taxonomy shared by the library and the CLI. Each failure carries a
// machine-readable category so callers can map it to a distinct exit code.
enum class ErrorCategory {
    Domain,     // evaluation point outside a declared domain
    Numerical,  // quadrature or iteration failed to reach tolerance
    Config,     // invalid construction parameters / empty grids
    Parse,      // malformed scenario document (syntax)
    Schema,     // well-formed document violating the schema
    Semantic,   // schema-valid document with inconsistent values
    Solver,     // root finder could not locate an interior optimum
    Model,      // a model assumption failed (e.g. concavity at the optimum)
};

inline const char* to_string(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Domain: return "domain";
        case ErrorCategory::Numerical: return "numerical";
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Parse: return "parse";
        case ErrorCategory::Schema: return "schema";
        case ErrorCategory::Semantic: return "semantic";
        case ErrorCategory::Solver: return "solver";
        case ErrorCategory::Model: return "model";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string message)
        : std::runtime_error(std::string(to_string(category)) + ": " + message),
          category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

class DomainError : public Error {
public:
    explicit DomainError(std::string message)
        : Error(ErrorCategory::Domain, std::move(message)) {}
};

class NumericalError : public Error {
public:
    NumericalError(std::string message, double error_estimate)
        : Error(ErrorCategory::Numerical,
                message + " (error estimate " + std::to_string(error_estimate) + ")"),
          error_estimate_(error_estimate) {}

    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string message)
        : Error(ErrorCategory::Config, std::move(message)) {}
};

class SolverError : public Error {
public:
    explicit SolverError(std::string message)
        : Error(ErrorCategory::Solver, std::move(message)) {}
};

class ModelError : public Error {
public:
    explicit ModelError(std::string message)
        : Error(ErrorCategory::Model, std::move(message)) {}
};

}  // namespace mixrisk
