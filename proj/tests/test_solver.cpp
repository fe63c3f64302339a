#include <doctest.h>

#include <cmath>
#include <optional>

#include "pohozaev/errors.hpp"
#include "pohozaev/solver.hpp"

using namespace pohozaev;

namespace {

SolverConfig quick(Index panels = 400) {
  SolverConfig c;
  c.panels = panels;
  c.sor_auto_omega = true;
  // ||v|| cannot go below the grid's floor (~7e-3 at M = 200, ~2e-3 at M = 400)
  if (panels < 1000) c.eps_stop = 1e-2;
  return c;
}

void check_solution_properties(const NonlinearityModel& m, const SolveResult& r, const SolverConfig& c) {
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.grad_norm < c.eps_stop);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].action <= r.trace[i - 1].action);
  for (const auto& rec : r.trace) CHECK(rec.pohozaev_residual <= 1e-9);
  const auto& u = r.solution.values();
  CHECK(u.minCoeff() >= -c.positivity_tol);
  for (Index i = 1; i < u.size(); ++i) CHECK(u[i] <= u[i - 1] + 1e-6);
  CHECK(std::abs(pohozaev_J(m, r.solution)) <= 1e-6 * std::max(1.0, grad_l2_sq(r.solution)));
  double fmax = 0.0;
  for (Index i = 0; i < u.size(); ++i) fmax = std::max(fmax, std::abs(m.f(u[i])));
  CHECK(radial_ode_residual(m, r.solution) <= 1e-2 * fmax);
}

}  // namespace

TEST_CASE("configuration validation") {
  CHECK_NOTHROW(SolverConfig{}.validate());
  SolverConfig c;
  c.alpha_min = 1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.sor_omega = 2.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.panels = 3;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.eps_stop = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.reproject_stride = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("initial guess") {
  const auto g = initial_guess(GuessKind::Gaussian, 100.0, 10.0, RadialGridd(1000, 1.0));
  CHECK(g.at_origin() == 100.0);
  CHECK(g[1000] == doctest::Approx(100.0 * std::exp(-10.0)));
  CHECK_THROWS_AS(initial_guess(GuessKind::Gaussian, 0.0, 10.0, RadialGridd(10, 1.0)), DomainError);
}

TEST_CASE("bracketing finds the minimum of a quadratic") {
  for (double a : {0.37, 2.5, 0.0123, 41.0}) {
    int calls = 0;
    auto phi = [&](double x) -> std::optional<double> {
      ++calls;
      return (x - a) * (x - a);
    };
    const LineSearchSettings s{0.1, 1e-10, 1000};
    const auto r = bracket_minimize(phi, a * a, s);
    CAPTURE(a);
    CHECK(r.outcome == LineOutcome::LineMinimum);
    CHECK(std::abs(r.alpha - a) <= 10.0 * s.alpha_min);
    CHECK(r.evaluations == calls);
  }
}

TEST_CASE("bracketing along an ascent direction stays put") {
  const LineSearchSettings s{0.1, 1e-10, 1000};
  const auto r = bracket_minimize([](double x) -> std::optional<double> { return 1.0 + x; }, 1.0, s);
  CHECK(r.outcome == LineOutcome::LineMinimum);
  CHECK(r.alpha <= s.alpha_min * s.cap);
  CHECK(r.alpha == 0.0);
}

TEST_CASE("bracketing restart triggers") {
  const LineSearchSettings s{0.1, 1e-10, 20};
  // strictly decreasing for the whole cap
  const auto down = bracket_minimize([](double x) -> std::optional<double> { return -x; }, 0.0, s);
  CHECK(down.outcome == LineOutcome::NeedRestart);
  CHECK(down.alpha == doctest::Approx(2.0));

  // infeasible after the third step
  const auto cut = bracket_minimize(
      [](double x) -> std::optional<double> {
        if (x > 0.35) return std::nullopt;
        return -x;
      },
      0.0, s);
  CHECK(cut.outcome == LineOutcome::NeedRestart);
  CHECK(cut.last_feasible_step == 3);
  CHECK(cut.alpha == doctest::Approx(0.3));

  // infeasible straight away: the step is refined instead
  const auto near = bracket_minimize(
      [](double x) -> std::optional<double> {
        if (x > 0.05) return std::nullopt;
        return (x - 0.02) * (x - 0.02);
      },
      0.0004, s);
  CHECK(near.outcome == LineOutcome::LineMinimum);
  CHECK(near.alpha == doctest::Approx(0.02).epsilon(1e-6));

  CHECK_THROWS_AS(bracket_minimize([](double) -> std::optional<double> { return 1.0; }, 1.0, s), LineSearchAnomaly);
}

TEST_CASE("bracketing leaves a local maximum towards the lower side") {
  // Minimum left of the first coarse point.
  const LineSearchSettings s{1.0, 1e-8, 1000};
  auto phi = [](double x) -> std::optional<double> { return (x - 0.63) * (x - 0.63) - 0.2 * std::exp(-50 * x * x); };
  const auto r = bracket_minimize(phi, *phi(0.0), s);
  double best = 0.0, best_val = *phi(0.0);
  for (double x = 0.0; x < 2.0; x += 1e-6)
    if (*phi(x) < best_val) best_val = *phi(x), best = x;
  CHECK(std::abs(r.alpha - best) < 1e-5);
}

TEST_CASE("power family ground state") {
  const auto m = make_power(1.0);
  const auto c = quick();
  const auto r = solve(m, c);
  check_solution_properties(m, r, c);
  CHECK(r.u_at_zero == doctest::Approx(4.33691).epsilon(3e-3));
  CHECK(r.action == doctest::Approx(18.89734).epsilon(3e-3));
  CHECK(r.trace.front().iteration == 0);
  CHECK(static_cast<long>(r.trace.size()) == r.outer_iterations + 1);
  CHECK(scaling_check(r, 1.0, c) == 0.0);
}

TEST_CASE("asymptotically linear ground state") {
  const auto m = make_asym_linear(1.0, 0.5);
  const auto c = quick(600);
  check_solution_properties(m, solve(m, c), c);
}

TEST_CASE("non-monotone ground state with restarts") {
  const auto m = make_nonmonotone(0.5, 1.0);
  const auto c = quick(1000);
  const auto r = solve(m, c);
  check_solution_properties(m, r, c);
  CHECK(r.restarts > 0);
}

TEST_CASE("reprojection stride") {
  const auto m = make_power(1.0);
  auto c = quick();
  const auto every = solve(m, c);
  c.reproject_stride = 5;
  const auto strided = solve(m, c);
  CHECK(strided.status == SolveStatus::Converged);
  CHECK(strided.action == doctest::Approx(every.action).epsilon(1e-3));
  CHECK(strided.u_at_zero == doctest::Approx(every.u_at_zero).epsilon(1e-3));
}

TEST_CASE("default relaxation gives the same answer") {
  const auto m = make_power(1.0);
  auto c = quick(200);
  const auto best = solve(m, c);
  c.sor_auto_omega = false;
  const auto fixed = solve(m, c);
  CHECK(fixed.status == SolveStatus::Converged);
  CHECK(fixed.action == doctest::Approx(best.action).epsilon(1e-5));
}

TEST_CASE("solve failure modes") {
  const auto m = make_power(1.0);
  const auto c = quick(100);
  const RadialGridd g(100, 1.0);
  CHECK_THROWS_AS(solve(m, c, initial_guess(GuessKind::Gaussian, 0.01, 10.0, g)), ProjectionInfeasible);
  CHECK_THROWS_AS(solve(m, c, RadialFunctiond::zero(g)), DomainError);

  auto capped = c;
  capped.max_outer_iterations = 3;
  const auto r = solve(m, capped);
  CHECK(r.status == SolveStatus::MaxIterations);
  CHECK(r.trace.size() == 3);
}

TEST_CASE("progress callback can stop a run") {
  int seen = 0;
  const auto r = solve(make_power(1.0), quick(100),
                       initial_guess(GuessKind::Gaussian, 100.0, 10.0, RadialGridd(100, 1.0)),
                       [&](const TraceRecord&) { return ++seen < 4; });
  CHECK(seen == 4);
  CHECK(r.trace.size() == 4);
}

TEST_CASE("a run below its discretisation floor stalls instead of spinning") {
  auto c = quick(100);
  c.eps_stop = 1e-9;
  const auto r = solve(make_power(1.0), c);
  CHECK(r.status == SolveStatus::MaxIterations);
  CHECK(r.stalled);
  CHECK(r.outer_iterations < c.max_outer_iterations - 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("truncation warning") {
  const auto r = solve(make_power(0.1), quick(200));
  CHECK(r.r_star_final() < 5.0 / std::sqrt(0.1));
  CHECK_FALSE(r.warnings.empty());
}
