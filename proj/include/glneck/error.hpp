#pragma once

#include <stdexcept>
#include <string>

namespace glneck {

/// Base error for everything raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration, arguments, or file formats (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

/// Numerical failure: non-convergence, degenerate inputs (CLI exit code 1).
struct NumericError : Error {
    using Error::Error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

}  // namespace glneck
