#pragma once

#include <stdexcept>
#include <string>

namespace tricho {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time argument lies outside its admissible set (t < 0, or (t,s) outside t >= s >= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A tabulated rate was queried outside its knot span.
class ExtrapolationError : public Error {
public:
    using Error::Error;
};

/// Malformed argument: empty grid, nonpositive step, bad triple, ...
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Shapes do not agree (dimension mismatch between members, operators, vectors).
class StructuralError : public Error {
public:
    using Error::Error;
};

/// U(t,s) restricted to Range P_j(s) is not an isomorphism onto Range P_j(t).
class NotStronglyInvariantError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Scenario file problems; the message names the offending key.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace tricho
