#pragma once

#include <stdexcept>
#include <string>

namespace pohozaev {

/// A parameter lies outside the domain where an operation is defined.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sequences that must share a grid have different lengths.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pointwise transform produced a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The parameter pair of a model family admits no ground state (e.g. lambda*s >= 1).
class InfeasibleFamilyError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The G-integral of a function is not positive, so no dilation puts it on the
/// Pohozaev manifold.
class ProjectionInfeasible : public std::runtime_error {
 public:
  explicit ProjectionInfeasible(double g_integral)
      : std::runtime_error("projection infeasible: integral of G is " +
                           std::to_string(g_integral) + " (must be > 0)"),
        g_integral_(g_integral) {}

  double g_integral() const noexcept { return g_integral_; }

 private:
  double g_integral_;
};

/// SOR did not reach its residual tolerance within the iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// The line search saw a flat landscape: neither a rise nor a restart trigger.
class LineSearchAnomaly : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pohozaev
