#pragma once

#include <stdexcept>
#include <string>

namespace pmf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Division attempt by an element that is not a unit in its ring.
struct NonUnitError : Error {
    using Error::Error;
};

/// Binary operation on values from incompatible coefficient rings.
struct RingMismatchError : Error {
    using Error::Error;
};

/// A rational coefficient has p in its denominator and cannot be reduced mod p^M.
struct DenominatorNotPrimeError : Error {
    using Error::Error;
};

/// Invalid parameter combination for an operation.
struct ParameterError : Error {
    using Error::Error;
};

/// An operator requiring a nebentypus tag was applied to an untagged form.
struct UntaggedFormError : Error {
    using Error::Error;
};

/// Supplied basis is linearly dependent at the working q-precision.
struct DegenerateBasisError : Error {
    using Error::Error;
};

/// A p-divisibility test is indeterminate at the working precision.
struct InsufficientPrecisionError : Error {
    using Error::Error;
};

} // namespace pmf
