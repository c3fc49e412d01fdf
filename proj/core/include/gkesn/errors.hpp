#pragma once

#include <stdexcept>
#include <string>

namespace gkesn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments, malformed configuration, violated preconditions.
/// The command-line driver maps this to exit code 2.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// Numerical breakdown: blow-up, singular systems, non-convergence.
/// The command-line driver maps this to exit code 3.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Filesystem and artifact-format failures.
/// The command-line driver maps this to exit code 4.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace gkesn
