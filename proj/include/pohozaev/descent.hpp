#pragma once

// Steepest descent direction of the action in H^1. The direction v solves the
// radial problem
//   v'' + (2/r) v' - v = -w'' - (2/r) w' + lambda w - f(w),   v'(0) = 0, v(R*) = 0,
// i.e. (Delta - 1) v = I'(w): v is minus the H^1 Riesz representative of I'(w).

#include <optional>

#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/radial.hpp"

namespace pohozaev {

/// Three-point rows  upper_i v_{i+1} + diag_i v_i + lower_i v_{i-1} = rhs_i  for
/// the interior nodes i = 1..M-1. Entries 0 and M are unused; the boundary
/// closures v_M = 0 and v_0 = (4 v_1 - v_2) / 3 complete the system.
struct TridiagonalSystem {
  RadialGridd grid;
  Vector<double> lower;
  Vector<double> diag;
  Vector<double> upper;
  Vector<double> rhs;
};

/// Rows of the discretised direction problem at w1 (centred differences).
TridiagonalSystem assemble_system(const NonlinearityModel& model, const RadialFunctiond& w1);

/// System with the same operator and a caller-supplied right-hand side.
TridiagonalSystem operator_system(const RadialGridd& grid, Vector<double> rhs);

/// Applies the left operator rows to v (interior entries; ends are zero).
Vector<double> apply_operator(const TridiagonalSystem& system, const Vector<double>& v);

/// max_i |row_i(v) - rhs_i| / |diag_i| over interior rows, divided by
/// max(1, max|v|). This is the quantity SOR drives below its tolerance.
double system_residual(const TridiagonalSystem& system, const Vector<double>& v);

struct SorSettings {
  double omega = 1.9;
  double tolerance = 1e-10;
  long max_iterations = 1'000'000;
  bool auto_omega = false;  ///< use optimal_relaxation(grid) instead of omega
};

/// Young's optimal relaxation for the direction operator on this grid. With
/// v = y / r the rows become the 1-D stencil y'' - y with y_0 = y_M = 0, so the
/// Jacobi spectral radius is cos(pi / M) / (1 + dr^2 / 2) exactly.
double optimal_relaxation(const RadialGridd& grid);

struct SorResult {
  Vector<double> values;
  long iterations = 0;
  double residual = 0.0;
};

/// Successive over-relaxation on the interior rows, with the boundary closures
/// re-imposed after every sweep. Throws NonConvergenceError when the budget is
/// exhausted.
SorResult sor_solve(const TridiagonalSystem& system, const SorSettings& settings,
                    const std::optional<Vector<double>>& initial = std::nullopt);

/// Thomas algorithm on the same closed system; used as a test oracle.
Vector<double> direct_solve(const TridiagonalSystem& system);

struct DescentDirection {
  RadialFunctiond direction;  ///< unit H^1 norm, or zero when raw_norm == 0
  RadialFunctiond raw;        ///< unnormalised solve v
  double raw_norm = 0.0;      ///< H^1 norm of v
  long sor_iterations = 0;
  double final_residual = 0.0;
};

/// Solves for v at w1 and normalises it. A warm start (nodal values from a
/// previous solve) only changes the SOR iteration count.
DescentDirection steepest_direction(const NonlinearityModel& model, const RadialFunctiond& w1,
                                    const SorSettings& settings,
                                    const std::optional<Vector<double>>& warm_start = std::nullopt);

}  // namespace pohozaev
