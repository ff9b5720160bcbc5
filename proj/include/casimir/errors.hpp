#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Input outside an operation's domain (non-positive frequency, bad geometry...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested operation not defined for this model variant.
class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or invalid permittivity table.
class TableError : public std::runtime_error {
 public:
  TableError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

/// An integral or sum did not reach its tolerance within budget. Carries the
/// best estimate so callers can report partial results.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial, double achieved_error)
      : std::runtime_error(what), partial_(partial), achieved_error_(achieved_error) {}
  double partial() const noexcept { return partial_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double partial_;
  double achieved_error_;
};

}  // namespace casimir
