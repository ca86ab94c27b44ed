#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fba {

/// Coarse failure classes. The CLI prints the category name as the first
/// token of its one-line error message.
enum class ErrorCategory {
  config,      // invalid or unknown configuration
  input,       // malformed caller input (dimension mismatch, bad file row)
  numeric,     // singular design, non-convergence
  io,          // filesystem failures
};

std::string_view to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorCategory::input, what) {}
};

class SingularDesignError : public Error {
 public:
  explicit SingularDesignError(const std::string& what) : Error(ErrorCategory::numeric, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(ErrorCategory::numeric, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace fba
