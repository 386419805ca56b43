#ifndef POLYSEMI_ERRORS_HPP
#define POLYSEMI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace polysemi {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Config file missing, unparsable, or schema-invalid.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A degree-one generator a*z+b with |a| <= 1 (no attracting fixed point
/// at infinity).
class InadmissibleGeneratorError : public Error {
public:
    using Error::Error;
};

/// Generator set contains no element of degree >= 2.
class MissingExpandingGeneratorError : public Error {
public:
    using Error::Error;
};

/// A constant (or zero) polynomial where a nonconstant one is required.
class DegenerateGeneratorError : public Error {
public:
    using Error::Error;
};

/// Composition would exceed the configured coefficient-degree cap.
class DegreeCapError : public Error {
public:
    using Error::Error;
};

/// Root solver failed to converge within its iteration budget.
class SolverFailureError : public Error {
public:
    SolverFailureError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

/// Word/leaf enumeration would exceed the enumeration cap.
class EnumerationCapError : public Error {
public:
    using Error::Error;
};

/// All tested Taylor coefficients fell below the zero threshold.
class IndeterminateOrderError : public Error {
public:
    using Error::Error;
};

/// Redundancy of a generator could not be decided within the word cap.
class UndecidedRedundancyError : public Error {
public:
    using Error::Error;
};

/// An operation's structural hypothesis does not hold (e.g. kappa
/// selection with fewer than two critical points).
class HypothesisViolationError : public Error {
public:
    using Error::Error;
};

/// Too few atoms / points for a statistical estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Paired inputs of mismatched length.
class MisalignedLengthsError : public Error {
public:
    using Error::Error;
};

/// Output path cannot be created or written.
class OutputError : public Error {
public:
    using Error::Error;
};

} // namespace polysemi

#endif
