#pragma once

#include <stdexcept>
#include <string>

namespace pldc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LP construction rejected (e.g. rank-deficient constraint matrix).
struct ConstructionError : Error {
    using Error::Error;
};

// Factorization failure that persisted after a refactorization retry.
struct NumericalError : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct TooLarge : Error {
    using Error::Error;
};

struct InfeasibleRhs : Error {
    using Error::Error;
};

struct SubproblemInfeasible : Error {
    using Error::Error;
};

struct SubproblemUnbounded : Error {
    using Error::Error;
};

struct MasterInfeasible : Error {
    using Error::Error;
};

struct TrainingInfeasible : Error {
    using Error::Error;
};

struct CmInfeasible : Error {
    using Error::Error;
};

struct EmptyPolicy : Error {
    using Error::Error;
};

struct EmptyBundle : Error {
    using Error::Error;
};

}  // namespace pldc
