#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gv {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ChartMismatch : public Error {
  public:
    using Error::Error;
};

class ParityError : public Error {
  public:
    using Error::Error;
};

// Raised when a graded quantity is asked for on an inhomogeneous element.
class InhomogeneityError : public Error {
  public:
    using Error::Error;
};

class ShapeError : public Error {
  public:
    ShapeError(std::string key, const std::string& what)
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

// An expression that parses but does not survive normalization (e.g. an odd
// variable raised to a power >= 2).
class NormalizationError : public Error {
  public:
    NormalizationError(const std::string& what, std::string expression)
        : Error(what + ": '" + expression + "'"), expression_(std::move(expression)) {}
    const std::string& expression() const noexcept { return expression_; }

  private:
    std::string expression_;
};

} // namespace gv
