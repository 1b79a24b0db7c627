#pragma once

#include <stdexcept>
#include <string>

namespace vlat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A comparison or valuation cannot be decided at the current precision.
class IndeterminateValuation : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class SplitError : public Error {
public:
    using Error::Error;
};

class NotApproximatelyIsometric : public Error {
public:
    using Error::Error;
};

class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

// Mixing value groups or ring backends.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vlat
