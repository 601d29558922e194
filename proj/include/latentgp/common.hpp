#pragma once

#include <stdexcept>
#include <string>

namespace latentgp {

// Bad caller input: dimension mismatches, invalid configuration, empty chains.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: failed factorizations, singular blocks, vanishing
// truncation mass. Messages carry the offending quantity.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text-format problems (CSV, config files); messages include line numbers.
struct ParseError : ArgumentError {
    using ArgumentError::ArgumentError;
};

}  // namespace latentgp
