#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracres {

enum class ErrorCategory { config, numerical, io };

/// Base of every error raised by the library. Carries the category used for
/// CLI exit codes and the name of the module that raised it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string module, const std::string& what)
      : std::runtime_error("[" + module + "] " + what),
        category_(category),
        module_(std::move(module)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCategory category_;
  std::string module_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string module, const std::string& what)
      : Error(ErrorCategory::config, std::move(module), what) {}
};

/// Input outside the analytic domain, e.g. a point on the branch cut.
class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NumericalError : public Error {
 public:
  NumericalError(std::string module, const std::string& what)
      : Error(ErrorCategory::numerical, std::move(module), what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, "io", what) {}
};

/// The requested tolerance cannot be met with the configured node count.
/// suggested_nodes() is 0 when no count up to the search cap works.
class RefinementNeeded : public NumericalError {
 public:
  RefinementNeeded(std::string module, const std::string& what, int suggested_nodes)
      : NumericalError(std::move(module), what), suggested_(suggested_nodes) {}
  int suggested_nodes() const noexcept { return suggested_; }

 private:
  int suggested_;
};

class SingularPivot : public NumericalError {
 public:
  SingularPivot(const std::string& what, std::size_t index)
      : NumericalError("numerics_core", what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class IllConditioned : public NumericalError {
 public:
  IllConditioned(const std::string& what, double residual)
      : NumericalError("numerics_core", what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A user-supplied function returned a non-finite value at a quadrature node.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& what, std::size_t node)
      : NumericalError("contour_engine", what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

inline int exit_code(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::config: return 2;
    case ErrorCategory::numerical: return 3;
    case ErrorCategory::io: return 4;
  }
  return 1;
}

}  // namespace fracres
