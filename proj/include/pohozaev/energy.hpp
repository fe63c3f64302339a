#pragma once

// The action functional, the Pohozaev functional and the projection onto the
// Pohozaev manifold P = { u != 0 : J(u) = 0 } in R^3.
//
// Under the dilation u(. / t) in three dimensions the gradient term scales by t
// and every potential term by t^3, so the fiber map is
//   h(t) = (t / 2) int |grad u|^2 + t^3 int (lambda u^2 / 2 - F(u))
// with unique maximiser t*^2 = int |grad u|^2 / (6 int G(u)).

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/radial.hpp"

namespace pohozaev {

inline constexpr int kDimension = 3;
/// Critical Sobolev exponent 2N / (N - 2) for N = 3.
inline constexpr double kCriticalExponent = 6.0;

/// The four integrals every functional here is assembled from.
struct Moments {
  double grad_sq = 0.0;  ///< int |grad w|^2
  double mass = 0.0;     ///< int w^2
  double F_int = 0.0;    ///< int F(w)
  double G_int = 0.0;    ///< int G(w) = -lambda/2 mass + F_int
};

Moments moments(const NonlinearityModel& model, const RadialFunctiond& w);

/// I(w) = 1/2 int (|grad w|^2 + lambda w^2) - int F(w).
double action_I(const NonlinearityModel& model, const RadialFunctiond& w);
double action_I(const NonlinearityModel& model, const Moments& m);

/// J(w) = int |grad w|^2 - 6 int G(w).
double pohozaev_J(const NonlinearityModel& model, const RadialFunctiond& w);

/// Dilation parameter putting w(. / t) on P, or nullopt when int G(w) <= 0.
std::optional<double> try_project_t(const NonlinearityModel& model, const RadialFunctiond& w);
std::optional<double> try_project_t(const Moments& m);

/// As try_project_t; throws ProjectionInfeasible instead of returning nullopt.
double project_t(const NonlinearityModel& model, const RadialFunctiond& w);

struct ProjectionResult {
  double t_star;
  RadialFunctiond projected;
  double action_at_t;
  double g_integral;  ///< int G of the input; int G of projected is t*^3 times this
};

std::optional<ProjectionResult> try_project(const NonlinearityModel& model, const RadialFunctiond& w);
ProjectionResult project(const NonlinearityModel& model, const RadialFunctiond& w);

/// h(t) = I(w(. / t)) evaluated from the moments of w.
double h_eval(const NonlinearityModel& model, const RadialFunctiond& w, double t);
double h_prime(const NonlinearityModel& model, const RadialFunctiond& w, double t);

struct FiberPoint {
  double t;
  double action;
};

/// I(t w) along the amplitude ray, one entry per t.
std::vector<FiberPoint> fiber_scan(const NonlinearityModel& model, const RadialFunctiond& w,
                                   std::span<const double> t_grid);

/// Indices of strict interior local maxima of a sampled curve.
std::vector<std::size_t> interior_maxima(std::span<const FiberPoint> curve);

}  // namespace pohozaev
