#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdncg {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A graph or state violates a structural invariant (disconnected, not a
/// tree, move not legal in the given state, ...).
class structural_error : public error {
 public:
  using error::error;
};

/// A generator or operation received parameters outside its feasible range.
class parameter_error : public error {
 public:
  using error::error;
};

/// An exhaustive enumeration would exceed its configured budget.
class budget_exceeded : public error {
 public:
  budget_exceeded(const std::string& what, std::size_t budget)
      : error(what + " (budget " + std::to_string(budget) + ")"), budget_(budget) {}

  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t budget_;
};

/// Malformed graph input. `line()` is 1-based, 0 when not line-oriented.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t line)
      : error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The stable set of a host is empty where one was required.
class no_equilibrium : public error {
 public:
  using error::error;
};

/// A certified inequality failed; the message names the inequality.
class certificate_failure : public error {
 public:
  using error::error;
};

}  // namespace sdncg
