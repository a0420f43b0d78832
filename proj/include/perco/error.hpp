#pragma once

#include <stdexcept>
#include <string>

namespace perco {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed grid text. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// A caller-side precondition does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Invalid cycle or path geometry.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// An internal invariant broke; always indicates a bug.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace perco
