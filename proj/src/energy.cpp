#include "pohozaev/energy.hpp"

#include <cmath>

namespace pohozaev {

Moments moments(const NonlinearityModel& model, const RadialFunctiond& w) {
  Moments m;
  m.grad_sq = grad_l2_sq(w);
  m.mass = l2_sq(w);
  m.F_int = radial_integral([&model](double u) { return model.F(u); }, w);
  m.G_int = -0.5 * model.lambda() * m.mass + m.F_int;
  return m;
}

double action_I(const NonlinearityModel& model, const Moments& m) {
  return 0.5 * (m.grad_sq + model.lambda() * m.mass) - m.F_int;
}

double action_I(const NonlinearityModel& model, const RadialFunctiond& w) {
  return action_I(model, moments(model, w));
}

double pohozaev_J(const NonlinearityModel& model, const RadialFunctiond& w) {
  const Moments m = moments(model, w);
  return m.grad_sq - kCriticalExponent * m.G_int;
}

std::optional<double> try_project_t(const Moments& m) {
  if (!(m.G_int > 0.0)) return std::nullopt;
  return std::sqrt(m.grad_sq / (kCriticalExponent * m.G_int));
}

std::optional<double> try_project_t(const NonlinearityModel& model, const RadialFunctiond& w) {
  return try_project_t(moments(model, w));
}

double project_t(const NonlinearityModel& model, const RadialFunctiond& w) {
  const Moments m = moments(model, w);
  if (auto t = try_project_t(m)) return *t;
  throw ProjectionInfeasible(m.G_int);
}

std::optional<ProjectionResult> try_project(const NonlinearityModel& model, const RadialFunctiond& w) {
  const Moments m = moments(model, w);
  const auto t = try_project_t(m);
  if (!t || !(*t > 0.0)) return std::nullopt;
  // h(t*) from the moments: t/2 grad + t^3 (lambda/2 mass - F)
  const double t3 = *t * *t * *t;
  const double action = 0.5 * *t * m.grad_sq + t3 * (0.5 * model.lambda() * m.mass - m.F_int);
  return ProjectionResult{*t, rescale(w, *t), action, m.G_int};
}

ProjectionResult project(const NonlinearityModel& model, const RadialFunctiond& w) {
  const Moments m = moments(model, w);
  if (!(m.G_int > 0.0)) throw ProjectionInfeasible(m.G_int);
  auto result = try_project(model, w);
  if (!result) throw ProjectionInfeasible(m.G_int);
  return std::move(*result);
}

double h_eval(const NonlinearityModel& model, const RadialFunctiond& w, double t) {
  if (!(t > 0.0)) throw DomainError("h_eval: t must be positive");
  const Moments m = moments(model, w);
  return 0.5 * t * m.grad_sq + t * t * t * (0.5 * model.lambda() * m.mass - m.F_int);
}

double h_prime(const NonlinearityModel& model, const RadialFunctiond& w, double t) {
  if (!(t > 0.0)) throw DomainError("h_prime: t must be positive");
  const Moments m = moments(model, w);
  return 0.5 * m.grad_sq - 3.0 * t * t * m.G_int;
}

std::vector<FiberPoint> fiber_scan(const NonlinearityModel& model, const RadialFunctiond& w,
                                   std::span<const double> t_grid) {
  std::vector<FiberPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("fiber_scan: t grid must be positive");
    out.push_back({t, action_I(model, w.with_values(t * w.values()))});
  }
  return out;
}

std::vector<std::size_t> interior_maxima(std::span<const FiberPoint> curve) {
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    if (curve[i].action > curve[i - 1].action && curve[i].action > curve[i + 1].action) peaks.push_back(i);
  }
  return peaks;
}

}  // namespace pohozaev
