#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skic {

// Base of every error thrown by the library. The CLI maps these to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnboundIdentifier : public Error {
 public:
  UnboundIdentifier(std::string name, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": unbound identifier '" + name +
              "'"),
        name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class DuplicateDefinition : public Error {
 public:
  explicit DuplicateDefinition(std::string name)
      : Error("duplicate definition '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class LexicalError : public Error {
 public:
  LexicalError(const std::string& what, std::size_t offset)
      : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when bracket abstraction meets a variable that is neither bound nor a known global.
class OpenTermError : public Error {
 public:
  explicit OpenTermError(std::string name)
      : Error("open term: free variable '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Deterministic runtime failure of a delta rule (64-bit overflow).
class EvalError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace skic
