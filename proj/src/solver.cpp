#include "pohozaev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace pohozaev {

void SolverConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive");
  };
  if (panels < RadialGridd::kMinPanels) throw DomainError("panels must be at least 4");
  positive(r_star, "r_star");
  positive(alpha0, "alpha0");
  positive(alpha_min, "alpha_min");
  if (alpha_min > alpha0) throw DomainError("alpha_min must not exceed alpha0");
  if (line_search_cap < 1) throw DomainError("line_search_cap must be positive");
  positive(eps_stop, "eps_stop");
  if (!(sor_omega > 0.0 && sor_omega < 2.0)) throw DomainError("sor_omega must lie in (0, 2)");
  positive(sor_tol, "sor_tol");
  if (sor_max_iterations < 1) throw DomainError("sor_max_iterations must be positive");
  if (reproject_stride < 1) throw DomainError("reproject_stride must be positive");
  if (max_outer_iterations < 1) throw DomainError("max_outer_iterations must be positive");
  positive(t_min, "t_min");
  positive(positivity_tol, "positivity_tol");
  positive(guess_amplitude, "guess_amplitude");
  positive(guess_width, "guess_width");
}

RadialFunctiond initial_guess(GuessKind kind, double amplitude, double width, const RadialGridd& grid) {
  if (!(amplitude > 0.0) || !(width > 0.0)) throw DomainError("initial_guess: amplitude and width must be positive");
  switch (kind) {
    case GuessKind::Gaussian:
      break;
  }
  return RadialFunctiond::sample(grid, [=](double r) { return amplitude * std::exp(-width * r * r); });
}

std::string status_id(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::RestartedExhausted: return "restarted_exhausted";
  }
  return "unknown";
}

BracketResult bracket_minimize(const std::function<std::optional<double>(double)>& phi, double phi0,
                               const LineSearchSettings& settings) {
  BracketResult res;
  auto eval = [&](double alpha) {
    ++res.evaluations;
    return phi(alpha);
  };

  double base = 0.0;
  double base_val = phi0;
  double step = settings.alpha0;

  // First level: march right from alpha = 0 until the value rises.
  {
    double prev = phi0;
    bool decreased = false;
    int k = 1;
    for (; k <= settings.cap; ++k) {
      const auto v = eval(k * step);
      if (!v) {
        if (k == 1) break;  // infeasible straight away: refine instead
        res.outcome = LineOutcome::NeedRestart;
        res.last_feasible_step = k - 1;
        res.alpha = (k - 1) * step;
        res.value = prev;
        return res;
      }
      if (*v > prev) break;
      if (*v < prev) decreased = true;
      prev = *v;
      res.last_feasible_step = k;
    }
    if (k > settings.cap) {
      if (!decreased) throw LineSearchAnomaly("line search: no decrease and no rise within the step cap");
      res.outcome = LineOutcome::NeedRestart;
      res.alpha = settings.cap * step;
      res.value = prev;
      return res;
    }
    base = (k - 1) * step;
    base_val = prev;
    step /= 10.0;
  }

  // Refinement levels: look at both neighbours, walk towards the lower one.
  const double stop = settings.alpha_min * (1.0 - 1e-9);
  while (step >= stop) {
    const auto right = eval(base + step);
    const std::optional<double> left = base - step >= 0.0 ? eval(base - step) : std::nullopt;
    int dir = 0;
    double first = base_val;
    if (right && *right < base_val && (!left || *right <= *left)) {
      dir = 1;
      first = *right;
    } else if (left && *left < base_val) {
      dir = -1;
      first = *left;
    }
    if (dir != 0) {
      double prev = first;
      int k = 1;
      while (k < settings.cap) {
        const double alpha = base + dir * (k + 1) * step;
        if (alpha < 0.0) break;
        const auto v = eval(alpha);
        if (!v || *v >= prev) break;
        prev = *v;
        ++k;
      }
      base += dir * k * step;
      base_val = prev;
    }
    step /= 10.0;
  }
  res.alpha = base;
  res.value = base_val;
  return res;
}

namespace {

RadialFunctiond along(const RadialFunctiond& w, const RadialFunctiond& direction, double alpha) {
  return w.with_values(w.values() + alpha * direction.values());
}

double relative_pohozaev_residual(const NonlinearityModel& model, const RadialFunctiond& w) {
  const Moments m = moments(model, w);
  return std::abs(m.grad_sq - kCriticalExponent * m.G_int) / std::max(1.0, m.grad_sq);
}

}  // namespace

LineMinimizeResult line_minimize(const NonlinearityModel& model, const RadialFunctiond& w1, double action_w1,
                                 const RadialFunctiond& direction, const SolverConfig& config) {
  // Reprojection every N_r trials; in between the last dilation is reused.
  int since_projection = 0;
  double stale_t = 1.0;
  bool infeasible_seen = false;
  bool collapse_seen = false;
  auto phi = [&](double alpha) -> std::optional<double> {
    const Moments m = moments(model, along(w1, direction, alpha));
    const auto fresh = try_project_t(m);
    if (!fresh) {
      infeasible_seen = true;
      return std::nullopt;
    }
    if (*fresh < config.t_min) {
      collapse_seen = true;
      return std::nullopt;
    }
    if (since_projection % config.reproject_stride == 0) stale_t = *fresh;
    ++since_projection;
    const double t = stale_t;
    return 0.5 * t * m.grad_sq + t * t * t * (0.5 * model.lambda() * m.mass - m.F_int);
  };

  const BracketResult bracket =
      bracket_minimize(phi, action_w1, {config.alpha0, config.alpha_min, config.line_search_cap});

  LineMinimizeResult out{bracket.outcome, bracket.alpha, along(w1, direction, bracket.alpha), std::nullopt,
                         bracket.evaluations, {}};
  out.projected = try_project(model, out.next);
  if (out.outcome == LineOutcome::NeedRestart) {
    out.restart_reason = collapse_seen      ? "dilation below t_min"
                         : infeasible_seen  ? "int G <= 0 along the line"
                                            : "no minimum within the step cap";
  }
  return out;
}

namespace {

// A replacement start when the converged critical point changes sign: the
// positive part and Gaussians of matching height, whichever projects lowest.
std::optional<RadialFunctiond> lower_positive_start(const NonlinearityModel& model, const RadialFunctiond& critical,
                                                    double critical_action) {
  std::vector<RadialFunctiond> candidates;
  candidates.push_back(critical.with_values(critical.values().cwiseMax(0.0)));
  const double height = std::max(critical.values().cwiseAbs().maxCoeff(), 1.0);
  const double extent = critical.grid().extent();
  for (double width : {0.3, 1.0, 3.0, 10.0, 30.0}) {
    const double sigma = width / (extent * extent);
    candidates.push_back(initial_guess(GuessKind::Gaussian, height, sigma, critical.grid()));
  }
  std::optional<RadialFunctiond> best;
  double best_action = critical_action;
  for (const auto& c : candidates) {
    const auto p = try_project(model, c);
    if (p && p->action_at_t < best_action) {
      best_action = p->action_at_t;
      best = c;
    }
  }
  return best;
}

constexpr int kMaxPositivityRestarts = 3;
constexpr int kIdleStepLimit = 3;

}  // namespace

SolveResult solve(const NonlinearityModel& model, const SolverConfig& config, const RadialFunctiond& guess,
                  const ProgressCallback& progress) {
  config.validate();
  if (guess.values().cwiseAbs().maxCoeff() == 0.0) throw DomainError("solve: initial guess is identically zero");

  SolveResult result{guess, 0.0, 0.0, 0.0, 0, 0, 0, {}, SolveStatus::MaxIterations, false, {}};
  const SorSettings sor = config.sor();

  // Step 1
  std::optional<ProjectionResult> current = try_project(model, guess);
  if (!current) throw ProjectionInfeasible(moments(model, guess).G_int);

  std::optional<Vector<double>> warm;
  double alpha_used = 0.0;
  int idle_steps = 0;
  for (long iter = 0;; ++iter) {
    // Step 2 has produced `current`; Step 3
    const RadialFunctiond& w1 = current->projected;
    const DescentDirection dir = steepest_direction(model, w1, sor, warm);
    TraceRecord record{iter,           current->action_at_t, current->t_star, alpha_used, dir.raw_norm,
                       dir.sor_iterations, relative_pohozaev_residual(model, w1)};
    result.trace.push_back(record);
    result.outer_iterations = iter;
    if (progress && !progress(record)) break;

    if (dir.raw_norm < config.eps_stop) {
      if (w1.values().minCoeff() >= -config.positivity_tol) {
        result.status = SolveStatus::Converged;
        break;
      }
      // Sign-changing critical point: restart below its level.
      if (result.positivity_restarts >= kMaxPositivityRestarts) {
        result.status = SolveStatus::RestartedExhausted;
        break;
      }
      auto fresh = lower_positive_start(model, w1, current->action_at_t);
      if (!fresh) {
        result.status = SolveStatus::RestartedExhausted;
        break;
      }
      ++result.positivity_restarts;
      ++result.restarts;
      current = try_project(model, *fresh);
      warm.reset();
      idle_steps = 0;
      alpha_used = 0.0;
      continue;
    }
    if (iter + 1 >= config.max_outer_iterations) {
      result.status = SolveStatus::MaxIterations;
      break;
    }
    // At the discretisation floor the line search keeps returning alpha = 0 and
    // every further iteration would repeat the same state.
    if (idle_steps >= kIdleStepLimit) {
      result.status = SolveStatus::MaxIterations;
      result.stalled = true;
      result.warnings.push_back("stalled: the line search made no progress; ||v|| is at its discretisation floor");
      break;
    }

    // Step 4
    LineMinimizeResult line = line_minimize(model, w1, current->action_at_t, dir.direction, config);
    if (line.outcome == LineOutcome::NeedRestart) ++result.restarts;
    if (!line.projected) {
      throw ProjectionInfeasible(moments(model, line.next).G_int);
    }
    // Step 5 (or Step 1 after a restart): the accepted point is re-projected.
    alpha_used = line.alpha;
    idle_steps = (line.outcome == LineOutcome::LineMinimum && line.alpha == 0.0) ? idle_steps + 1 : 0;
    warm = dir.raw.values();
    current = std::move(line.projected);
  }

  result.solution = current->projected;
  result.action = current->action_at_t;
  result.grad_norm = result.trace.empty() ? 0.0 : result.trace.back().grad_norm;
  result.u_at_zero = result.solution.at_origin();
  if (result.r_star_final() < 5.0 / std::sqrt(model.lambda())) {
    std::ostringstream msg;
    msg << "final extent R* = " << result.r_star_final() << " is below 5/sqrt(lambda); the tail is likely truncated";
    result.warnings.push_back(msg.str());
  }
  return result;
}

SolveResult solve(const NonlinearityModel& model, const SolverConfig& config) {
  config.validate();
  const RadialGridd grid(config.panels, config.r_star);
  return solve(model, config, initial_guess(GuessKind::Gaussian, config.guess_amplitude, config.guess_width, grid));
}

double radial_ode_residual(const NonlinearityModel& model, const RadialFunctiond& u) {
  const Index m = u.grid().panels();
  const double h = u.grid().spacing();
  const auto& v = u.values();
  double worst = 0.0;
  for (Index i = 1; i < m; ++i) {
    const double r = u.grid().node(i);
    const double second = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    const double first = (v[i + 1] - v[i - 1]) / (2.0 * h);
    worst = std::max(worst, std::abs(-second - 2.0 / r * first + model.lambda() * v[i] - model.f(v[i])));
  }
  return worst;
}

double scaling_check(const SolveResult& u1_result, double lambda, const SolverConfig& config) {
  if (lambda == 1.0) return 0.0;
  const SolveResult scaled = solve(make_power(lambda), config);
  const double expected = std::sqrt(lambda) * u1_result.u_at_zero;
  return std::abs(scaled.u_at_zero - expected) / expected;
}

}  // namespace pohozaev
