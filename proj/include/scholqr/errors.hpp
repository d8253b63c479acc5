// Exception types shared by all scholqr modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scholqr {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not fit the operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Argument outside its documented domain (NaN entries, sigma not in (0,1), ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A triangular factor with a zero on its diagonal was handed to a solve.
class SingularFactor : public Error {
public:
    explicit SingularFactor(std::size_t index)
        : Error("singular triangular factor: zero diagonal at index " + std::to_string(index)),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class AllZeroMatrix : public Error {
public:
    AllZeroMatrix() : Error("matrix has no entry above the zero tolerance") {}
};

/// Metrics requested for an outcome that did not complete.
class FailedOutcome : public Error {
public:
    using Error::Error;
};

/// A bound family was requested for a plan that cannot instantiate it.
class BranchMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed Matrix Market input; line() is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Matrix Market field or symmetry this reader does not handle (complex, pattern).
class UnsupportedField : public Error {
public:
    using Error::Error;
};

}  // namespace scholqr
