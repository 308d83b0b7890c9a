#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gstbn {

// Base for every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs that disagree with each other (grid shapes, variables, empty domains).
class StructuralError : public Error {
public:
    using Error::Error;
};

// Timestamps that are not strictly increasing.
class OrderingError : public Error {
public:
    using Error::Error;
};

// No eligible sensor exists to observe an RoI.
class NoObserversError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// Out-of-range user parameter (trial counts, removal counts, coordinates).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Malformed input file. what() reads "<path>:<line>: <message>".
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, const std::string& message)
        : Error(path + ":" + std::to_string(line) + ": " + message),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

}  // namespace gstbn
