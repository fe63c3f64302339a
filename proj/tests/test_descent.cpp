#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "pohozaev/errors.hpp"
#include "pohozaev/descent.hpp"
#include "pohozaev/energy.hpp"

using namespace pohozaev;

namespace {

// Applies the row stencil by hand, independently of apply_operator.
Vector<double> stencil(const RadialGridd& g, const Vector<double>& v) {
  const double h = g.spacing();
  Vector<double> out = Vector<double>::Zero(g.size());
  for (Index i = 1; i < g.panels(); ++i) {
    const double r = g.node(i);
    out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h) + (v[i + 1] - v[i - 1]) / (r * h) - v[i];
  }
  return out;
}

double manufactured(double r, double R) { return std::exp(-r * r) - std::exp(-R * R); }

SorSettings tight() { return {1.9, 1e-12, 10'000'000, true}; }

}  // namespace

TEST_CASE("row coefficients") {
  const auto w = RadialFunctiond::sample(RadialGridd(200, 3.0), [](double r) { return std::exp(-r * r); });
  const auto s = assemble_system(make_power(1.0), w);
  const double h = s.grid.spacing();
  for (Index i = 1; i < s.grid.panels(); ++i) {
    CHECK(s.upper[i] + s.lower[i] == doctest::Approx(2.0 / (h * h)).epsilon(1e-13));
    CHECK(s.diag[i] == doctest::Approx(-(2.0 / (h * h) + 1.0)).epsilon(1e-15));
  }
  // the v_0 coefficient of row 1 vanishes exactly
  CHECK(s.lower[1] == 0.0);
}

TEST_CASE("right-hand side") {
  const auto m = make_power(1.5);
  const auto zero = RadialFunctiond::zero(RadialGridd(100, 2.0));
  CHECK(assemble_system(m, zero).rhs.cwiseAbs().maxCoeff() == 0.0);

  // rhs = -w'' - (2/r) w' + lambda w - f(w) in the discrete sense
  const auto w = RadialFunctiond::sample(RadialGridd(100, 2.0), [](double r) { return 2.0 * std::exp(-r * r); });
  const auto s = assemble_system(m, w);
  const Vector<double> lap = stencil(w.grid(), w.values()) + w.values();
  for (Index i = 1; i < 100; ++i) {
    CHECK(s.rhs[i] == doctest::Approx(-lap[i] + 1.5 * w[i] - m.f(w[i])).epsilon(1e-10));
  }
}

TEST_CASE("zero right-hand side gives zero") {
  const RadialGridd g(300, 5.0);
  const auto s = operator_system(g, Vector<double>::Zero(g.size()));
  const auto r = sor_solve(s, {1.9, 1e-10, 1'000'000, false});
  CHECK(r.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(direct_solve(s).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manufactured round-trip") {
  const double R = 4.0;
  for (bool auto_omega : {false, true}) {
    const RadialGridd g(400, R);
    const auto v = RadialFunctiond::sample(g, [&](double r) { return manufactured(r, R); }).values();
    const auto s = operator_system(g, stencil(g, v));
    const SorSettings settings{1.9, 1e-12, 10'000'000, auto_omega};
    const auto solved = sor_solve(s, settings);
    CHECK(solved.residual <= 1e-12);
    CHECK(system_residual(s, solved.values) == doctest::Approx(solved.residual));
    // interior nodes reproduce v up to solver error; the closure at r = 0 adds O(dr^2)
    CHECK((solved.values - v).segment(1, g.panels() - 1).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(solved.values[0] - v[0]) < 10.0 * g.spacing() * g.spacing());
    CHECK((solved.values - direct_solve(s)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("continuous manufactured problem converges at second order") {
  // Right-hand side from the exact operator, so the only error is truncation.
  const double R = 4.0;
  std::vector<double> h, err;
  for (Index m : {250, 500, 1000}) {
    const RadialGridd g(m, R);
    Vector<double> rhs = Vector<double>::Zero(g.size());
    for (Index i = 1; i < m; ++i) {
      const double r = g.node(i), e = std::exp(-r * r);
      // v'' + 2 v' / r - v for v = e^{-r^2} - e^{-R^2}
      rhs[i] = (4.0 * r * r - 6.0) * e - manufactured(r, R);
    }
    const auto solved = sor_solve(operator_system(g, rhs), tight());
    double worst = 0.0;
    for (Index i = 0; i <= m; ++i) worst = std::max(worst, std::abs(solved.values[i] - manufactured(g.node(i), R)));
    h.push_back(g.spacing());
    err.push_back(worst);
  }
  const double order = oracle::observed_order(h, err);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("SOR reports non-convergence") {
  const RadialGridd g(500, 5.0);
  const auto v = RadialFunctiond::sample(g, [](double r) { return manufactured(r, 5.0); }).values();
  const auto s = operator_system(g, stencil(g, v));
  try {
    sor_solve(s, {1.9, 1e-12, 5, false});
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(e.last_residual() > 1e-12);
  }
  CHECK_THROWS_AS(sor_solve(s, {2.0, 1e-10, 10, false}), DomainError);
  CHECK_THROWS_AS(sor_solve(s, {0.0, 1e-10, 10, false}), DomainError);
}

TEST_CASE("optimal relaxation beats the default") {
  const RadialGridd g(1000, 1.0);
  const auto v = RadialFunctiond::sample(g, [](double r) { return manufactured(r, 1.0); }).values();
  const auto s = operator_system(g, stencil(g, v));
  const auto fixed = sor_solve(s, {1.9, 1e-10, 10'000'000, false});
  const auto best = sor_solve(s, {1.9, 1e-10, 10'000'000, true});
  CHECK(optimal_relaxation(g) > 1.9);
  CHECK(optimal_relaxation(g) < 2.0);
  CHECK(best.iterations < fixed.iterations);
  // both stop at relative residual 1e-10; the condition number is ~4e6
  CHECK((fixed.values - best.values).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("direction normalisation and residual contract") {
  const auto m = make_power(1.0);
  const auto w = project(m, RadialFunctiond::sample(RadialGridd(400, 1.0),
                                                    [](double r) { return 100.0 * std::exp(-10.0 * r * r); }))
                     .projected;
  const SorSettings settings{1.9, 1e-10, 1'000'000, true};
  const auto d = steepest_direction(m, w, settings);
  REQUIRE(d.raw_norm > 0.0);
  CHECK(std::abs(h1_norm_sq(d.direction) - 1.0) <= 1e-6);
  CHECK(d.raw_norm == doctest::Approx(std::sqrt(h1_norm_sq(d.raw))).epsilon(1e-12));
  CHECK(d.final_residual <= settings.tolerance);
  CHECK(system_residual(assemble_system(m, w), d.raw.values()) == doctest::Approx(d.final_residual));

  // a warm start from the answer needs no sweeps
  const auto again = steepest_direction(m, w, settings, d.raw.values());
  CHECK(again.sor_iterations == 0);
}

TEST_CASE("discrete solution has zero direction") {
  // w = 0 solves every problem here
  const auto m = make_power(1.0);
  const auto zero = RadialFunctiond::zero(RadialGridd(50, 2.0));
  const auto d = steepest_direction(m, zero, {1.9, 1e-10, 1000, false});
  CHECK(d.raw_norm == 0.0);
  CHECK(d.direction.values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("secant along the direction is negative") {
  std::mt19937 rng(20240607);
  std::uniform_real_distribution<double> amp(4.0, 40.0), width(0.5, 20.0), wiggle(-0.2, 0.2);
  const std::vector<NonlinearityModel> models{make_power(1.0), make_asym_linear(0.5, 0.5)};
  int checked = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto& m = models[trial % 2];
    const double a = amp(rng), s = width(rng), c1 = wiggle(rng), c2 = wiggle(rng);
    const RadialGridd g(300, 2.0);
    const auto w = RadialFunctiond::sample(g, [&](double r) {
      return a * std::exp(-s * r * r) * (1.0 + c1 * std::cos(2.0 * r) + c2 * r * r / 4.0);
    });
    const auto p = try_project(m, w);
    REQUIRE(p.has_value());
    const auto d = steepest_direction(m, p->projected, {1.9, 1e-12, 10'000'000, true});
    REQUIRE(d.raw_norm > 1e-3);
    const double delta = 1e-6 * (1.0 + std::sqrt(h1_norm_sq(p->projected)));
    const auto moved = p->projected.with_values(p->projected.values() + delta * d.direction.values());
    const double secant = (action_I(m, moved) - action_I(m, p->projected)) / delta;
    CAPTURE(trial);
    CHECK(secant < 0.0);
    ++checked;
  }
  CHECK(checked == 20);
}
