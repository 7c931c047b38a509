#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aoa {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coincident points or a rank-deficient linear system.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class InvalidDvoaError : public Error {
public:
    using Error::Error;
};

/// Malformed caller input: length mismatches, out-of-range counts, bad config.
class InputError : public Error {
public:
    using Error::Error;
};

/// Every candidate solve failed, so no estimate exists.
class EstimationFailure : public Error {
public:
    using Error::Error;
};

/// A combinatorial search would exceed its enumeration cap.
class ResourceError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace aoa
