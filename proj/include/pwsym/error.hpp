#pragma once

#include <stdexcept>
#include <string>

namespace pwsym {

/// Base of every failure raised by the library. The CLI maps these to exit
/// code 2 ("numeric failure") except for ParseError/UsageError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

class CatalogError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "catalog"; }
};

/// Series did not converge within the term budget.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double last_term)
        : Error(what), last_term_(last_term) {}
    double last_term() const noexcept { return last_term_; }
    const char* kind() const noexcept override { return "truncation"; }

private:
    double last_term_;
};

/// Argument outside the evaluable domain, or result beyond the overflow guard.
class RangeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "range"; }
};

/// Successive quadrature refinements failed to agree.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double coarse, double fine)
        : Error(what), coarse_(coarse), fine_(fine) {}
    double coarse() const noexcept { return coarse_; }
    double fine() const noexcept { return fine_; }
    const char* kind() const noexcept override { return "quadrature"; }

private:
    double coarse_;
    double fine_;
};

class ResolutionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resolution"; }
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate"; }
};

/// Function DSL parse failure; position is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const noexcept { return position_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t position_;
};

} // namespace pwsym
