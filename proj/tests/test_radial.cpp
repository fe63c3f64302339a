#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "pohozaev/errors.hpp"
#include "pohozaev/radial.hpp"

using namespace pohozaev;

namespace {

RadialFunctiond sampled(Index panels, double extent, double (*fn)(double)) {
  return RadialFunctiond::sample(RadialGridd(panels, extent), fn);
}

}  // namespace

TEST_CASE("grid layout") {
  const RadialGridd g(1000, 2.0);
  CHECK(g.size() == 1001);
  CHECK(g.spacing() == doctest::Approx(0.002));
  CHECK(g.node(0) == 0.0);
  CHECK(g.extent() == doctest::Approx(2.0));
  CHECK_THROWS_AS(RadialGridd(3, 1.0), DomainError);
  CHECK_THROWS_AS(RadialGridd(10, 0.0), DomainError);
  CHECK_THROWS_AS(RadialGridd(10, -1.0), DomainError);
}

TEST_CASE("functions validate their samples") {
  const RadialGridd g(10, 1.0);
  CHECK_THROWS_AS(RadialFunctiond(g, Vector<double>::Zero(10)), DimensionError);
  Vector<double> bad = Vector<double>::Zero(11);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(RadialFunctiond(g, bad), EvaluationError);
}

TEST_CASE("trapezoid on polynomials") {
  for (Index m : {4, 7, 100}) {
    const RadialGridd g(m, 1.0);
    CHECK(trapezoid(Vector<double>::Constant(g.size(), 2.5), g) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(trapezoid(g.nodes(), g) == doctest::Approx(0.5).epsilon(1e-14));
  }
  const RadialGridd g(1000, 1.0);
  CHECK(std::abs(trapezoid(g.nodes().cwiseAbs2(), g) - 1.0 / 3.0) < 1e-6);
  CHECK_THROWS_AS(trapezoid(Vector<double>::Zero(5), g), DimensionError);
}

TEST_CASE("trapezoid converges at second order") {
  std::vector<double> h, err;
  const double exact = 1.0 - std::exp(-1.0);
  for (Index m : {100, 200, 400, 800}) {
    const RadialGridd g(m, 1.0);
    const Vector<double> v = (-g.nodes().array()).exp().matrix();
    h.push_back(g.spacing());
    err.push_back(std::abs(trapezoid(v, g) - exact));
  }
  const double order = oracle::observed_order(h, err);
  CHECK(order >= 1.9);
  CHECK(order <= 2.1);
}

TEST_CASE("ball integrals") {
  const auto one = sampled(1000, 1.0, [](double) { return 1.0; });
  CHECK(radial_integral([](double u) { return 0.0 * u; }, one) == 0.0);
  CHECK(std::abs(radial_integral([](double u) { return u * u; }, one) - 4.0 * oracle::kPi / 3.0) < 1e-5);

  const auto gauss = sampled(2000, 10.0, [](double r) { return std::exp(-r * r); });
  const double expected = 4.0 * oracle::kPi * 0.25 * std::sqrt(oracle::kPi / 8.0);
  CHECK(std::abs(radial_integral([](double u) { return u * u; }, gauss) - expected) < 1e-6);

  CHECK_THROWS_AS(radial_integral([](double u) { return std::log(u - 2.0); }, one), EvaluationError);
}

TEST_CASE("derivative stencil is second order") {
  std::vector<double> h, err;
  for (Index m : {100, 200, 400, 800}) {
    const auto w = sampled(m, oracle::kPi, [](double r) { return std::sin(r); });
    const Vector<double> d = derivative(w);
    double worst = 0.0;
    for (Index i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(d[i] - std::cos(w.grid().node(i))));
    h.push_back(w.grid().spacing());
    err.push_back(worst);
  }
  const double order = oracle::observed_order(h, err);
  CHECK(order >= 1.9);
  CHECK(order <= 2.1);
}

TEST_CASE("gradient and H1 norms") {
  CHECK(grad_l2_sq(sampled(50, 1.0, [](double) { return 7.0; })) == 0.0);

  const auto linear = sampled(1000, 1.0, [](double r) { return r; });
  // trapezoid on 4 pi r^2 carries the exact bias 4 pi h^2 / 6
  const double h = linear.grid().spacing();
  CHECK(grad_l2_sq(linear) == doctest::Approx(4.0 * oracle::kPi * (1.0 / 3.0 + h * h / 6.0)).epsilon(1e-12));
  CHECK(std::abs(h1_norm_sq(linear) - 4.0 * oracle::kPi * (1.0 / 3.0 + 1.0 / 5.0)) < 1e-5);
  CHECK(h1_norm_sq(RadialFunctiond::zero(RadialGridd(10, 1.0))) == 0.0);

  const auto g = sampled(2000, 10.0, [](double r) { return 3.0 * std::exp(-r * r); });
  const double expected = 4.0 * oracle::kPi * 36.0 * (3.0 / 32.0) * std::sqrt(oracle::kPi / 2.0);
  // second-order quadrature at h = 0.005
  CHECK(grad_l2_sq(g) == doctest::Approx(expected).epsilon(3e-5));
  CHECK(expected == doctest::Approx(oracle::gaussian(3.0, 1.0).grad_sq).epsilon(1e-12));
}

TEST_CASE("H1 norm is additive over disjoint supports") {
  // Bumps separated by more than one stencil width so derivatives do not overlap.
  const RadialGridd g(400, 4.0);
  auto bump = [](double c) {
    return [c](double r) { return std::abs(r - c) < 0.5 ? std::pow(std::cos(oracle::kPi * (r - c)), 4) : 0.0; };
  };
  const auto a = RadialFunctiond::sample(g, bump(1.0));
  const auto b = RadialFunctiond::sample(g, bump(3.0));
  const auto sum = a.with_values(a.values() + b.values());
  CHECK(h1_norm_sq(sum) == doctest::Approx(h1_norm_sq(a) + h1_norm_sq(b)).epsilon(1e-13));
}

TEST_CASE("rescaling scales the discrete integrals exactly") {
  const auto w = sampled(800, 6.0, [](double r) { return std::exp(-r * r) * (1.0 + 0.3 * std::cos(3.0 * r)); });
  CHECK(rescale(w, 1.0).grid() == w.grid());
  CHECK(rescale(w, 1.0).values() == w.values());
  CHECK_THROWS_AS(rescale(w, 0.0), DomainError);
  CHECK_THROWS_AS(rescale(w, -2.0), DomainError);

  const double eps = std::numeric_limits<double>::epsilon();
  for (double t : {2.0, 0.37, 1.9, 13.5}) {
    const auto s = rescale(w, t);
    CHECK(s.grid().extent() == doctest::Approx(t * w.grid().extent()));
    const double mass = l2_sq(w), scaled_mass = l2_sq(s);
    CHECK(std::abs(scaled_mass - t * t * t * mass) <= 10.0 * eps * t * t * t * mass);
    const double quartic = radial_integral([](double u) { return u * u * u * u; }, w);
    const double scaled_quartic = radial_integral([](double u) { return u * u * u * u; }, s);
    CHECK(std::abs(scaled_quartic - t * t * t * quartic) <= 10.0 * eps * t * t * t * quartic);
    const double grad = grad_l2_sq(w), scaled_grad = grad_l2_sq(s);
    CHECK(std::abs(scaled_grad - t * grad) <= 10.0 * eps * t * grad);
  }
}

TEST_CASE("interpolation") {
  const auto w = sampled(10, 1.0, [](double r) { return 2.0 * r + 1.0; });
  CHECK(interpolate(w, 0.0) == doctest::Approx(1.0));
  CHECK(interpolate(w, 0.55) == doctest::Approx(2.1));
  CHECK(interpolate(w, 1.0) == doctest::Approx(3.0));
  CHECK(interpolate(w, 1.5) == 0.0);
}
