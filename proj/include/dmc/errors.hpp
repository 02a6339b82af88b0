#pragma once

#include <stdexcept>
#include <string>

namespace dmc {

/// Root of every error the library throws.  `exit_code` is the process
/// status the command-line tool reports for it.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  [[nodiscard]] virtual int exit_code() const noexcept { return 1; }
  [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] int exit_code() const noexcept override { return 2; }
  [[nodiscard]] const char* kind() const noexcept override { return "parse"; }
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 2; }
  [[nodiscard]] const char* kind() const noexcept override { return "validation"; }
};

class DisconnectedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  [[nodiscard]] const char* kind() const noexcept override { return "disconnected"; }
};

/// Refusal to run a configuration, e.g. a tree-packing count above the cap.
class PolicyError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  [[nodiscard]] const char* kind() const noexcept override { return "policy"; }
};

class NoCutFound : public Error {
 public:
  using Error::Error;
  [[nodiscard]] int exit_code() const noexcept override { return 5; }
  [[nodiscard]] const char* kind() const noexcept override { return "no_cut"; }
};

}  // namespace dmc
