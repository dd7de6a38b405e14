#pragma once

#include <stdexcept>
#include <string>

namespace hopt {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundaries of two morphisms (or a morphism and an object) disagree.
class TypeMismatch : public Error {
public:
    using Error::Error;
};

/// An enumeration or carrier exceeded the configured bound.
class BoundExceeded : public Error {
public:
    using Error::Error;
};

/// The backend lacks the requested structure (e.g. compact cups in FINSET).
class Unsupported : public Error {
public:
    using Error::Error;
};

class ResolutionError : public Error {
public:
    using Error::Error;
};

class OracleFailure : public Error {
public:
    using Error::Error;
};

class ChainMismatch : public Error {
public:
    using Error::Error;
};

class LawViolation : public Error {
public:
    using Error::Error;
};

/// Malformed DSL source; carries the 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what), line_(line),
          column_(column)
    {
    }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

} // namespace hopt
