#pragma once

#include <stdexcept>
#include <string>

namespace dnv {

/// Raised when user-supplied parameters or inputs violate a documented
/// precondition (bad breakpoints, infeasible cluster parameters, ...).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation (negative
/// action, quantile level outside (0,1]).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dnv
