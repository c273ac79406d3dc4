#pragma once

#include <stdexcept>
#include <string>

namespace catlog {

// Common base so callers can catch everything the library throws in one arm.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed surface text. Positions are 1-based; col points at the offending token.
struct SyntaxError : Error {
    int line;
    int col;
    SyntaxError(const std::string& what, int line_, int col_)
        : Error(what + " (line " + std::to_string(line_) + ", col " + std::to_string(col_) + ")"),
          line(line_), col(col_) {}
};

// Identifier used but not declared in the signature (and not bindable as a variable).
struct UnknownSymbol : Error {
    using Error::Error;
};

// Operation or predicate applied to the wrong number of arguments.
struct ArityMismatch : Error {
    using Error::Error;
};

// Term or equation is ill-sorted, or a variable's sort cannot be determined.
struct SortMismatch : Error {
    using Error::Error;
};

// Theory does not fit the logical fragment an operation requires.
struct FragmentViolation : Error {
    using Error::Error;
};

// An enumeration or materialization would exceed its size/work budget.
struct BoundExceeded : Error {
    using Error::Error;
};

// Operation is undefined on the one-element (0 = 1) Boolean algebra.
struct DegenerateAlgebra : Error {
    using Error::Error;
};

// A claimed structure-preserving map fails to preserve structure.
struct NotAHomomorphism : Error {
    using Error::Error;
};

// Two artifacts built over different signatures were combined.
struct SignatureMismatch : Error {
    using Error::Error;
};

// A decision backend cannot settle the query within its configured limits.
struct BackendUnavailable : Error {
    using Error::Error;
};

// Malformed artifact supplied by the caller (bad table, bad map, bad index).
struct ValidationError : Error {
    using Error::Error;
};

// A theorem the code relies on failed to hold at runtime. Always a bug.
struct InternalInvariantViolation : Error {
    using Error::Error;
};

} // namespace catlog
