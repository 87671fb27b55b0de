#pragma once

#include <stdexcept>
#include <string>

namespace gridshaver {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class FitDiverged : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ZeroIrradiance : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class UnstableStep : public Error {
public:
    using Error::Error;
};

class UnknownLoadId : public Error {
public:
    using Error::Error;
};

class IslandedExchange : public Error {
public:
    using Error::Error;
};

}  // namespace gridshaver
