#ifndef PLAP_ERRORS_HPP
#define PLAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plap {

/// Polar angle requested at the origin (or on the branch cut).
class UndefinedAngleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Critical Sobolev exponent requested outside 1 < p < n.
class NotDefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Threshold requested for exponents with an empty window (q <= 2p/(2-p)).
class NoWindowError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Solver asked for a supercritical power nonlinearity.
class RefusedRegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iteration failed to reach the residual tolerance.
class ConvergenceFailureError : public std::runtime_error {
public:
    ConvergenceFailureError(const std::string& what, double last_residual)
        : std::runtime_error(what), last_residual_(last_residual) {}
    double last_residual() const { return last_residual_; }

private:
    double last_residual_;
};

/// Radial oracle could not bracket or meet its boundary target.
class OracleFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A field paired with a domain it is not evaluable on.
class InvalidPairingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation restricted to one domain type got another, or the
/// caller-supplied domain disagrees with the mesh provenance.
class InvalidDomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed CLI/config text.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace plap

#endif
