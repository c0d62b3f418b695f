#pragma once

#include <stdexcept>
#include <string>

namespace densekit {

// Malformed instance files and option strings.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated an operation's stated precondition (bad k, beta out of
// range, infeasible parameters, ...).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// An exact mode was asked to enumerate past its configured ceiling.
struct CeilingError : std::runtime_error {
    explicit CeilingError(const std::string& msg) : std::runtime_error(msg) {}
};

// A solver oracle misbehaved: returned an infeasible solution, or a
// "violated" constraint that re-verification shows is satisfied.
struct OracleError : std::runtime_error {
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

// The ellipsoid driver lost positive-definiteness or exceeded its iteration
// cap without a volume certificate.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// A low-probability structural event fired (multi-origin edge in the
// inflated graph). Drivers re-sample and retry before surfacing this.
struct BadEventError : std::runtime_error {
    explicit BadEventError(const std::string& msg) : std::runtime_error(msg) {}
};

// The CSP engine's sampling step could not reach the good-certificate
// threshold within its retry budget.
struct ShortfallError : std::runtime_error {
    explicit ShortfallError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace densekit
