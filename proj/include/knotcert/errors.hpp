#pragma once

#include <stdexcept>
#include <string>

namespace knotcert {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (parameter range, zero vector, arity).
class DomainError : public Error {
public:
    using Error::Error;
};

// First derivative vanishes (or cannot be certified away from zero).
class RegularityError : public Error {
public:
    using Error::Error;
};

// Curve comes closer to itself than the simplicity threshold.
class SelfIntersectionError : public Error {
public:
    using Error::Error;
};

// A configured size cap would be exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

// The a-priori iteration formula has a nonpositive denominator.
class BoundInfeasibleError : public Error {
public:
    using Error::Error;
};

// A polyline edge lies entirely in a normal-disc plane.
class DegenerateIncidenceError : public Error {
public:
    DegenerateIncidenceError(const std::string& what, std::size_t edge)
        : Error(what), edge_(edge) {}
    std::size_t edge() const { return edge_; }

private:
    std::size_t edge_;
};

// Internal state contradicts an established certificate.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// Nearest-parameter projection has two equally good answers.
class AmbiguityError : public Error {
public:
    AmbiguityError(const std::string& what, double t_first, double t_second)
        : Error(what), t_first_(t_first), t_second_(t_second) {}
    double first() const { return t_first_; }
    double second() const { return t_second_; }

private:
    double t_first_;
    double t_second_;
};

// A point is claimed by two non-adjacent pipe sections.
class DisjointnessError : public Error {
public:
    using Error::Error;
};

// Malformed input document.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                what),
          line_(line),
          column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace knotcert
