#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lieep {

enum class ErrorKind {
  invalid_input,
  overflow,
  shape,
  unsupported_degree,
  window,
  parameter,
  step_singularity,
  divergence,
  non_convergence,
  alignment,
  insufficient_data,
  config,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::shape: return "shape";
    case ErrorKind::unsupported_degree: return "unsupported_degree";
    case ErrorKind::window: return "window";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::step_singularity: return "step_singularity";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

/// Base of every error raised by the library. The kind is what callers
/// branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// The linear system of a linearly implicit step is singular to working
/// precision.
class StepSingularityError : public Error {
 public:
  StepSingularityError(double h, double condition_estimate, const std::string& what)
      : Error(ErrorKind::step_singularity, what), h_(h), condition_(condition_estimate) {}

  [[nodiscard]] double step_size() const noexcept { return h_; }
  [[nodiscard]] double condition_estimate() const noexcept { return condition_; }

 private:
  double h_;
  double condition_;
};

/// Fixed-point iteration failed; carries the last successive-difference norm.
class IterationError : public Error {
 public:
  IterationError(ErrorKind kind, double residual, int iterations, const std::string& what)
      : Error(kind, what), residual_(residual), iterations_(iterations) {}

  [[nodiscard]] double residual() const noexcept { return residual_; }
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace lieep
