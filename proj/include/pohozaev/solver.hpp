#pragma once

// Minimisation of the action on the Pohozaev manifold: project, find the H^1
// steepest descent direction, line-search along it with every trial point
// re-projected, repeat until the direction norm falls below eps_stop.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pohozaev/descent.hpp"
#include "pohozaev/energy.hpp"
#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/radial.hpp"

namespace pohozaev {

struct SolverConfig {
  Index panels = 1000;
  double r_star = 1.0;
  double alpha0 = 0.1;
  double alpha_min = 1e-10;
  int line_search_cap = 1000;
  double eps_stop = 1e-3;
  double sor_omega = 1.9;
  bool sor_auto_omega = false;
  double sor_tol = 1e-10;
  long sor_max_iterations = 1'000'000;
  int reproject_stride = 1;
  long max_outer_iterations = 10'000;
  double t_min = 1e-6;
  double positivity_tol = 1e-8;
  double guess_amplitude = 100.0;
  double guess_width = 10.0;

  /// Throws DomainError on any non-positive entry, alpha_min > alpha0 or omega outside (0, 2).
  void validate() const;

  SorSettings sor() const { return {sor_omega, sor_tol, sor_max_iterations, sor_auto_omega}; }
};

enum class GuessKind { Gaussian };

/// A exp(-sigma r^2) sampled on the grid.
RadialFunctiond initial_guess(GuessKind kind, double amplitude, double width, const RadialGridd& grid);

enum class LineOutcome { LineMinimum, NeedRestart };

struct LineSearchSettings {
  double alpha0 = 0.1;
  double alpha_min = 1e-10;
  int cap = 1000;
};

struct BracketResult {
  LineOutcome outcome = LineOutcome::LineMinimum;
  double alpha = 0.0;
  double value = 0.0;
  int evaluations = 0;
  int last_feasible_step = 0;  ///< top-level k of the last feasible trial (restart case)
};

/// Coarse-to-fine search for a minimiser of phi on alpha >= 0, starting from
/// phi(0) = phi0. Each level marches with step alpha0 / 10^level until the
/// value rises, then restarts from the best point with a ten times finer step;
/// a point higher than both neighbours moves to the lower one. phi returns
/// nullopt where the trial point cannot be evaluated. On the first level, K
/// strictly decreasing steps or an infeasible trial give NeedRestart; K steps
/// with no decrease at all throw LineSearchAnomaly.
BracketResult bracket_minimize(const std::function<std::optional<double>(double)>& phi, double phi0,
                               const LineSearchSettings& settings);

struct LineMinimizeResult {
  LineOutcome outcome = LineOutcome::LineMinimum;
  double alpha = 0.0;
  RadialFunctiond next;                      ///< w1 + alpha v (unprojected)
  std::optional<ProjectionResult> projected; ///< projection of next, when feasible
  int evaluations = 0;
  std::string restart_reason;
};

/// Line search along w1 + alpha * direction with phi(alpha) = I(project(w1 + alpha direction)).
LineMinimizeResult line_minimize(const NonlinearityModel& model, const RadialFunctiond& w1, double action_w1,
                                 const RadialFunctiond& direction, const SolverConfig& config);

enum class SolveStatus { Converged, MaxIterations, RestartedExhausted };
std::string status_id(SolveStatus status);

struct TraceRecord {
  long iteration = 0;
  double action = 0.0;
  double t_star = 0.0;
  double alpha = 0.0;
  double grad_norm = 0.0;
  long sor_iterations = 0;
  double pohozaev_residual = 0.0;  ///< |J| / max(1, int |grad u|^2) right after projection
};

struct SolveResult {
  RadialFunctiond solution;
  double action = 0.0;
  double grad_norm = 0.0;
  double u_at_zero = 0.0;
  long outer_iterations = 0;
  int restarts = 0;
  int positivity_restarts = 0;
  std::vector<TraceRecord> trace;
  SolveStatus status = SolveStatus::MaxIterations;
  bool stalled = false;  ///< stopped early because the line search no longer moved
  std::vector<std::string> warnings;

  double r_star_final() const { return solution.grid().extent(); }
};

/// Called after every outer iteration; return false to stop early.
using ProgressCallback = std::function<bool(const TraceRecord&)>;

/// Runs the full minimisation from the given guess. Throws ProjectionInfeasible
/// when int G(guess) <= 0 and NonConvergenceError if SOR fails.
SolveResult solve(const NonlinearityModel& model, const SolverConfig& config, const RadialFunctiond& guess,
                  const ProgressCallback& progress = {});

/// Solve from the configured Gaussian guess on [0, r_star].
SolveResult solve(const NonlinearityModel& model, const SolverConfig& config);

/// max over interior nodes of |-u'' - (2/r) u' + lambda u - f(u)| (centred differences).
double radial_ode_residual(const NonlinearityModel& model, const RadialFunctiond& u);

/// Relative error of u_lambda(0) against sqrt(lambda) * u_1(0) for the cubic family.
double scaling_check(const SolveResult& u1_result, double lambda, const SolverConfig& config);

}  // namespace pohozaev
