#pragma once

#include <stdexcept>
#include <string>

namespace continuized {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A problem description violates its preconditions (empty diagonal, bad weights, ...).
class InvalidProblem : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(const std::string& what, std::size_t expected, std::size_t got)
        : Error(what + ": expected dimension " + std::to_string(expected) + ", got " +
                std::to_string(got)) {}
};

/// Raised when a time-varying schedule is evaluated where it is singular (t = 0).
class SingularSchedule : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Graph construction or spectral computation failed (disconnected, duplicate edge, ...).
class InvalidGraph : public Error {
public:
    using Error::Error;
};

class EdgeNotFound : public Error {
public:
    EdgeNotFound(std::size_t v, std::size_t w)
        : Error("edge {" + std::to_string(v) + "," + std::to_string(w) + "} is not in the graph") {}
};

}  // namespace continuized
