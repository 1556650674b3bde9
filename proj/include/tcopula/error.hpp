#pragma once

#include <stdexcept>
#include <string>

namespace tcopula {

// A parameter lies outside the mathematical domain of the operation
// (|rho| > 1, nu <= 0, an undefined moment, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A structurally invalid request (empty grid, zero samples, bad text).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tcopula
