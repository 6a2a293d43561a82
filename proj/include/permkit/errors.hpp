#pragma once

#include <stdexcept>
#include <string>

namespace permkit {

/// Base class for all permkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidMatrix : Error {
    using Error::Error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct SingularMatrix : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct ZeroDiagonal : Error {
    using Error::Error;
};
struct NegativeScale : Error {
    using Error::Error;
};
struct NotNormalizable : Error {
    using Error::Error;
};
struct MixedSigns : Error {
    using Error::Error;
};
struct NegativePairProduct : Error {
    using Error::Error;
};
struct NotSymmetric : Error {
    using Error::Error;
};
struct ZeroDenominator : Error {
    using Error::Error;
};
struct NonPositiveInput : Error {
    using Error::Error;
};
struct PreconditionViolated : Error {
    using Error::Error;
};
struct NotMMatrix : Error {
    using Error::Error;
};
struct DegreeTooLarge : Error {
    using Error::Error;
};
struct NotClass1 : Error {
    using Error::Error;
};
struct BadBeta : Error {
    using Error::Error;
};
struct SignConstraint : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

}  // namespace permkit
