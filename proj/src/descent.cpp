#include "pohozaev/descent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pohozaev {

namespace {

void fill_operator(TridiagonalSystem& s) {
  const Index n = s.grid.size();
  const Index m = s.grid.panels();
  const double h = s.grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  s.lower = Vector<double>::Zero(n);
  s.diag = Vector<double>::Zero(n);
  s.upper = Vector<double>::Zero(n);
  for (Index i = 1; i < m; ++i) {
    const double r = s.grid.node(i);
    const double advect = 1.0 / (r * h);
    s.upper[i] = inv_h2 + advect;
    s.diag[i] = -(2.0 * inv_h2 + 1.0);
    s.lower[i] = inv_h2 - advect;
  }
}

inline void close_boundaries(double* v, Index m) {
  v[m] = 0.0;
  v[0] = (4.0 * v[1] - v[2]) / 3.0;
}

}  // namespace

TridiagonalSystem assemble_system(const NonlinearityModel& model, const RadialFunctiond& w1) {
  TridiagonalSystem s{w1.grid(), {}, {}, {}, {}};
  fill_operator(s);
  const Index m = s.grid.panels();
  const double inv_h2 = 1.0 / (s.grid.spacing() * s.grid.spacing());
  const auto& w = w1.values();
  s.rhs = Vector<double>::Zero(s.grid.size());
  for (Index i = 1; i < m; ++i) {
    // alpha' = -alpha, beta' = 2/dr^2 + lambda, gamma' = -gamma
    s.rhs[i] = -s.upper[i] * w[i + 1] + (2.0 * inv_h2 + model.lambda()) * w[i] - s.lower[i] * w[i - 1] -
               model.f(w[i]);
  }
  return s;
}

TridiagonalSystem operator_system(const RadialGridd& grid, Vector<double> rhs) {
  if (rhs.size() != grid.size()) throw DimensionError("operator_system: rhs length does not match the grid");
  TridiagonalSystem s{grid, {}, {}, {}, std::move(rhs)};
  fill_operator(s);
  return s;
}

Vector<double> apply_operator(const TridiagonalSystem& s, const Vector<double>& v) {
  if (v.size() != s.grid.size()) throw DimensionError("apply_operator: vector length does not match the grid");
  const Index m = s.grid.panels();
  Vector<double> out = Vector<double>::Zero(v.size());
  for (Index i = 1; i < m; ++i) out[i] = s.upper[i] * v[i + 1] + s.diag[i] * v[i] + s.lower[i] * v[i - 1];
  return out;
}

double system_residual(const TridiagonalSystem& s, const Vector<double>& v) {
  const Vector<double> lhs = apply_operator(s, v);
  const Index m = s.grid.panels();
  double worst = 0.0;
  for (Index i = 1; i < m; ++i) worst = std::max(worst, std::abs(lhs[i] - s.rhs[i]) / std::abs(s.diag[i]));
  return worst / std::max(1.0, v.cwiseAbs().maxCoeff());
}

double optimal_relaxation(const RadialGridd& grid) {
  const double h = grid.spacing();
  const double rho = std::cos(std::numbers::pi / static_cast<double>(grid.panels())) / (1.0 + 0.5 * h * h);
  return 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
}

SorResult sor_solve(const TridiagonalSystem& s, const SorSettings& settings,
                    const std::optional<Vector<double>>& initial) {
  const double omega = settings.auto_omega ? optimal_relaxation(s.grid) : settings.omega;
  if (!(omega > 0.0 && omega < 2.0)) throw DomainError("SOR relaxation must lie in (0, 2)");
  if (!(settings.tolerance > 0.0)) throw DomainError("SOR tolerance must be positive");
  const Index n = s.grid.size();
  const Index m = s.grid.panels();
  SorResult result;
  result.values = initial && initial->size() == n ? *initial : Vector<double>::Zero(n);
  double* v = result.values.data();
  close_boundaries(v, m);

  // v_i <- (1 - omega) v_i + omega (b_i - up_i v_{i+1} - lo_i v_{i-1}) / diag_i,
  // folded so that only the v_{i-1} term sits on the sweep's dependency chain.
  Vector<double> c(n), a(n), l(n);
  for (Index i = 1; i < m; ++i) {
    const double inv = omega / s.diag[i];
    c[i] = inv * s.rhs[i];
    a[i] = -inv * s.upper[i];
    l[i] = -inv * s.lower[i];
  }
  const double keep = 1.0 - omega;

  // After a sweep the true scaled residual is at most about 2x the largest
  // correction, so the exact check only runs once corrections are well below tolerance.
  result.residual = system_residual(s, result.values);
  while (result.residual > settings.tolerance) {
    if (result.iterations >= settings.max_iterations) {
      throw NonConvergenceError("SOR did not converge in " + std::to_string(settings.max_iterations) +
                                    " sweeps (residual " + std::to_string(result.residual) + ")",
                                result.residual);
    }
    double largest = 0.0;
    double scale = 1.0;
    for (Index i = 1; i < m; ++i) {
      const double old = v[i];
      const double updated = (keep * old + c[i] + a[i] * v[i + 1]) + l[i] * v[i - 1];
      v[i] = updated;
      largest = std::max(largest, std::abs(updated - old));
      scale = std::max(scale, std::abs(updated));
    }
    close_boundaries(v, m);
    ++result.iterations;
    if (largest <= 0.5 * omega * settings.tolerance * scale) result.residual = system_residual(s, result.values);
  }
  return result;
}

Vector<double> direct_solve(const TridiagonalSystem& s) {
  // Unknowns v_1..v_{M-1}; v_0 drops out of row 1 because its lower
  // coefficient 1/dr^2 - 1/(r_1 dr) vanishes, and v_M = 0.
  const Index m = s.grid.panels();
  const Index k = m - 1;
  Vector<double> c(k), d(k);
  for (Index j = 0; j < k; ++j) {
    const Index i = j + 1;
    const double lower = j > 0 ? s.lower[i] : 0.0;
    const double denom = s.diag[i] - (j > 0 ? lower * c[j - 1] : 0.0);
    c[j] = (i + 1 < m) ? s.upper[i] / denom : 0.0;
    d[j] = (s.rhs[i] - (j > 0 ? lower * d[j - 1] : 0.0)) / denom;
  }
  Vector<double> v = Vector<double>::Zero(s.grid.size());
  for (Index j = k - 1; j >= 0; --j) v[j + 1] = d[j] - (j + 1 < k ? c[j] * v[j + 2] : 0.0);
  close_boundaries(v.data(), m);
  return v;
}

DescentDirection steepest_direction(const NonlinearityModel& model, const RadialFunctiond& w1,
                                    const SorSettings& settings, const std::optional<Vector<double>>& warm_start) {
  const TridiagonalSystem system = assemble_system(model, w1);
  SorResult solved = sor_solve(system, settings, warm_start);
  RadialFunctiond raw = w1.with_values(std::move(solved.values));
  const double norm = std::sqrt(h1_norm_sq(raw));
  RadialFunctiond direction = norm > 0.0 ? raw.with_values(raw.values() / norm) : RadialFunctiond::zero(w1.grid());
  return DescentDirection{std::move(direction), std::move(raw), norm, solved.iterations, solved.residual};
}

}  // namespace pohozaev
