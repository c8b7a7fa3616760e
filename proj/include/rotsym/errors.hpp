#pragma once

#include <stdexcept>
#include <string>

namespace rotsym {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural problems in piece lists (gaps, overlaps, bad parameters).
// Distinct from an admissibility failure, which is reported, not thrown.
struct MalformedPieces : Error {
    using Error::Error;
};

// Unreadable or unwritable files.
struct IoError : Error {
    using Error::Error;
};

// Evaluation requested outside the domain of definition.
struct OutOfDomain : Error {
    using Error::Error;
};

// A quantity left its numerical domain by more than rounding allows.
struct NumericalDomain : Error {
    using Error::Error;
};

// Operation undefined exactly at the horizon r = r0.
struct SingularAtHorizon : Error {
    using Error::Error;
};

// Derivative requested exactly at a kink of a non-mollified profile.
struct CornerDerivative : Error {
    using Error::Error;
};

// Adaptive quadrature could not meet its tolerance within budget.
struct QuadratureFailure : Error {
    using Error::Error;
};

// Profile has no declared finite tail mass.
struct UnboundedTail : Error {
    using Error::Error;
};

// delta outside [0, 1), where the comparison machinery applies.
struct DeltaOutOfRange : Error {
    using Error::Error;
};

// Generator parameters admit no valid profile.
struct InfeasibleParameters : Error {
    using Error::Error;
};

// Requested tube is not contained in the sphere-preserving region.
struct TubeEscapesRegion : Error {
    using Error::Error;
};

} // namespace rotsym
