#pragma once

#include <stdexcept>
#include <string>

namespace supeuclid {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shape disagreement between operands (message carries both shapes).
struct DimensionError : Error { using Error::Error; };
// Malformed bytes in a binary or CSV input.
struct FormatError : Error { using Error::Error; };
// Vector norm below the normalization threshold.
struct DegenerateVectorError : Error { using Error::Error; };
// A documented data invariant does not hold (e.g. non-unit embedding rows).
struct InvariantError : Error { using Error::Error; };
// No anchor in a contrastive batch has a positive.
struct EmptyPositivesError : Error { using Error::Error; };
// NaN/Inf produced where finite values are required.
struct NumericError : Error { using Error::Error; };
// Too few samples to perform the requested operation.
struct InsufficientDataError : Error { using Error::Error; };
// A class index has no samples when fitting prototypes.
struct EmptyClassError : Error { using Error::Error; };
// Augmentation mode incompatible with the data layout.
struct ModeError : Error { using Error::Error; };
// Invalid argument values (empty score sets, NaN scores, bad ranges).
struct InputError : Error { using Error::Error; };
// Caller violated a documented precondition (stale cache, bad epoch index).
struct ContractError : Error { using Error::Error; };
// Invalid or unknown configuration entries.
struct ConfigError : Error { using Error::Error; };
// Filesystem failures: missing or unreadable/unwritable files.
struct IoError : Error { using Error::Error; };

}  // namespace supeuclid
