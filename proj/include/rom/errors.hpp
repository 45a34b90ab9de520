#pragma once
#include <stdexcept>
#include <string>

namespace rom {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad input data or configuration (CLI exit code 2).
struct DataError : Error {
    using Error::Error;
};

/// Malformed file content; message carries "path:line".
struct ParseError : DataError {
    ParseError(const std::string& path, long line, const std::string& what)
        : DataError(path + ":" + std::to_string(line) + ": " + what),
          line_number(line) {}
    long line_number = 0;
};

/// Numerically degenerate state, e.g. free-fall or coincident markers
/// (CLI exit code 3).
struct NumericError : Error {
    using Error::Error;
};

}  // namespace rom
