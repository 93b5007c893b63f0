#pragma once

#include <stdexcept>
#include <string>

namespace spectree {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tree defining sequences violate the regularity constraints
/// (non-monotone distances, t_0 != 0, branching number < 2, ...).
struct InvalidSequence : Error {
  using Error::Error;
};

/// Argument outside the domain of the requested quantity
/// (e.g. branching function past the radius of a finite tree).
struct OutOfRange : Error {
  using Error::Error;
};

/// The requested operator has essential spectrum; eigenvalue counting
/// is meaningless (infinite radius without a confining potential or cutoff).
struct NotDiscrete : Error {
  using Error::Error;
};

/// Truncation brackets failed to settle within the generation budget.
struct BadTruncation : Error {
  using Error::Error;
};

/// lambda is indistinguishable from an eigenvalue at the working
/// resolution; the caller should perturb lambda and retry.
struct EigenvalueAtThreshold : Error {
  using Error::Error;
};

/// An exact integer quantity (multiplicity, assembled count) exceeds
/// the 64-bit range.
struct OverflowError : Error {
  using Error::Error;
};

/// Finite-difference oracle mesh too coarse for the requested accuracy.
struct MeshTooCoarse : Error {
  using Error::Error;
};

/// Operation does not apply to this tree/potential configuration
/// (divergent total length, finite radius where infinite is required, ...).
struct NotApplicable : Error {
  using Error::Error;
};

/// Malformed configuration text.
struct ParseError : Error {
  using Error::Error;
};

/// Well-formed configuration with an invalid field value.
struct ValidationError : Error {
  using Error::Error;
};

}  // namespace spectree
