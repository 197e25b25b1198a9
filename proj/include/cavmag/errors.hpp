#pragma once

#include <stdexcept>
#include <string>

namespace cavmag {

/// Base class for all cavmag errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid model parameters, malformed configuration, violated preconditions.
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure: singular evaluation, eigensolver non-convergence,
/// diverged fit, integrator step too large.
struct NumericError : Error {
    using Error::Error;
};

/// File system / parsing failures.
struct IoError : Error {
    using Error::Error;
};

} // namespace cavmag
