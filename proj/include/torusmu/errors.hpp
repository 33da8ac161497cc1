// include/torusmu/errors.hpp
#pragma once

#include <stdexcept>
#include <string>

namespace torusmu {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested range exceeds the configured segment capacity.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of the operation (e.g. n < 1).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed multiplicative or polynomial specification.
class SpecError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Parameters violate an operation's precondition (r == s, H > M, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace torusmu
