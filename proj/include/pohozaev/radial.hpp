#pragma once

// Radial grids, nodal functions and the quadrature kernels everything else is
// built on. All integrals are over a ball in R^3 reduced to [0, R*] with the
// 4*pi*r^2 Jacobian.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "pohozaev/errors.hpp"

namespace pohozaev {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Uniform mesh r_i = i * dr, i = 0..M, on [0, M * dr].
template <typename Scalar>
class RadialGrid {
 public:
  static constexpr Index kMinPanels = 4;

  RadialGrid(Index panels, Scalar extent) : panels_(panels), spacing_(extent / Scalar(panels)) {
    if (panels < kMinPanels) {
      throw DomainError("RadialGrid needs at least " + std::to_string(kMinPanels) + " panels, got " +
                        std::to_string(panels));
    }
    if (!(extent > Scalar(0)) || !std::isfinite(static_cast<double>(extent))) {
      throw DomainError("RadialGrid extent must be positive and finite");
    }
  }

  static RadialGrid from_spacing(Index panels, Scalar spacing) {
    RadialGrid grid(panels, Scalar(1));
    if (!(spacing > Scalar(0)) || !std::isfinite(static_cast<double>(spacing))) {
      throw DomainError("RadialGrid spacing must be positive and finite");
    }
    grid.spacing_ = spacing;
    return grid;
  }

  Index panels() const noexcept { return panels_; }
  Index size() const noexcept { return panels_ + 1; }
  Scalar spacing() const noexcept { return spacing_; }
  Scalar extent() const noexcept { return Scalar(panels_) * spacing_; }
  Scalar node(Index i) const noexcept { return Scalar(i) * spacing_; }

  Vector<Scalar> nodes() const {
    Vector<Scalar> r(size());
    for (Index i = 0; i < size(); ++i) r[i] = node(i);
    return r;
  }

  /// The same node count with spacing multiplied by t.
  RadialGrid scaled(Scalar t) const { return from_spacing(panels_, spacing_ * t); }

  friend bool operator==(const RadialGrid&, const RadialGrid&) = default;

 private:
  Index panels_;
  Scalar spacing_;
};

/// Nodal samples of a radial function. Immutable once built.
template <typename Scalar>
class RadialFunction {
 public:
  RadialFunction(RadialGrid<Scalar> grid, Vector<Scalar> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
      throw DimensionError("RadialFunction: " + std::to_string(values_.size()) + " values for " +
                           std::to_string(grid_.size()) + " nodes");
    }
    if (!values_.allFinite()) throw EvaluationError("RadialFunction: non-finite nodal value");
  }

  /// Samples fn(r_i) on every node.
  template <typename Fn>
  static RadialFunction sample(const RadialGrid<Scalar>& grid, Fn&& fn) {
    Vector<Scalar> v(grid.size());
    for (Index i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
    return RadialFunction(grid, std::move(v));
  }

  static RadialFunction zero(const RadialGrid<Scalar>& grid) {
    return RadialFunction(grid, Vector<Scalar>::Zero(grid.size()));
  }

  const RadialGrid<Scalar>& grid() const noexcept { return grid_; }
  const Vector<Scalar>& values() const noexcept { return values_; }
  Index size() const noexcept { return values_.size(); }
  Scalar operator[](Index i) const { return values_[i]; }
  Scalar at_origin() const { return values_[0]; }

  /// New function on the same grid.
  RadialFunction with_values(Vector<Scalar> values) const { return RadialFunction(grid_, std::move(values)); }

 private:
  RadialGrid<Scalar> grid_;
  Vector<Scalar> values_;
};

using RadialGridd = RadialGrid<double>;
using RadialFunctiond = RadialFunction<double>;

template <typename Scalar>
inline constexpr Scalar kFourPi = Scalar(4) * std::numbers::pi_v<Scalar>;

/// Composite trapezoid rule over the grid nodes.
template <typename Derived, typename Scalar>
Scalar trapezoid(const Eigen::MatrixBase<Derived>& h, const RadialGrid<Scalar>& grid) {
  if (h.size() != grid.size()) {
    throw DimensionError("trapezoid: " + std::to_string(h.size()) + " samples for " +
                         std::to_string(grid.size()) + " nodes");
  }
  const Index m = grid.panels();
  const Scalar interior = m > 1 ? Scalar(h.segment(1, m - 1).sum()) : Scalar(0);
  return grid.spacing() * ((h(0) + h(m)) / Scalar(2) + interior);
}

/// 4*pi * trapezoid(h_i * r_i^2): the integral over the ball of radius R* of
/// a radial density given by its nodal values.
template <typename Derived, typename Scalar>
Scalar ball_integral(const Eigen::MatrixBase<Derived>& h, const RadialGrid<Scalar>& grid) {
  if (h.size() != grid.size()) {
    throw DimensionError("ball_integral: " + std::to_string(h.size()) + " samples for " +
                         std::to_string(grid.size()) + " nodes");
  }
  const Vector<Scalar> r = grid.nodes();
  return kFourPi<Scalar> * trapezoid(h.cwiseProduct(r.cwiseProduct(r)), grid);
}

/// Integral over the ball of g(w(x)).
template <typename Scalar, typename Transform>
Scalar radial_integral(Transform&& g, const RadialFunction<Scalar>& w) {
  Vector<Scalar> h(w.size());
  for (Index i = 0; i < w.size(); ++i) {
    h[i] = g(w[i]);
    if (!std::isfinite(static_cast<double>(h[i]))) {
      throw EvaluationError("radial_integral: transform is not finite at node " + std::to_string(i));
    }
  }
  return ball_integral(h, w.grid());
}

/// Nodal first derivative: second-order centred differences inside, second-order
/// one-sided stencils at r = 0 and r = R*.
template <typename Scalar>
Vector<Scalar> derivative(const RadialFunction<Scalar>& w) {
  const Index m = w.grid().panels();
  const Scalar inv2h = Scalar(1) / (Scalar(2) * w.grid().spacing());
  const auto& u = w.values();
  Vector<Scalar> d(w.size());
  d[0] = (-Scalar(3) * u[0] + Scalar(4) * u[1] - u[2]) * inv2h;
  d.segment(1, m - 1) = (u.segment(2, m - 1) - u.segment(0, m - 1)) * inv2h;
  d[m] = (Scalar(3) * u[m] - Scalar(4) * u[m - 1] + u[m - 2]) * inv2h;
  return d;
}

/// Integral over the ball of |grad w|^2.
template <typename Scalar>
Scalar grad_l2_sq(const RadialFunction<Scalar>& w) {
  const Vector<Scalar> d = derivative(w);
  return ball_integral(d.cwiseAbs2(), w.grid());
}

/// Integral over the ball of w^2.
template <typename Scalar>
Scalar l2_sq(const RadialFunction<Scalar>& w) {
  return ball_integral(w.values().cwiseAbs2(), w.grid());
}

/// Squared H^1 norm, int |grad w|^2 + w^2.
template <typename Scalar>
Scalar h1_norm_sq(const RadialFunction<Scalar>& w) {
  return grad_l2_sq(w) + l2_sq(w);
}

/// The dilation w(. / t), represented by stretching the grid instead of
/// resampling: nodal values are kept and the spacing becomes t * dr.
template <typename Scalar>
RadialFunction<Scalar> rescale(const RadialFunction<Scalar>& w, Scalar t) {
  if (!(t > Scalar(0)) || !std::isfinite(static_cast<double>(t))) {
    throw DomainError("rescale: t must be positive and finite");
  }
  return RadialFunction<Scalar>(w.grid().scaled(t), w.values());
}

/// Piecewise-linear evaluation of w at radius r; zero beyond the grid.
template <typename Scalar>
Scalar interpolate(const RadialFunction<Scalar>& w, Scalar r) {
  if (r <= Scalar(0)) return w[0];
  const Scalar x = r / w.grid().spacing();
  const auto i = static_cast<Index>(std::floor(static_cast<double>(x)));
  if (i >= w.grid().panels()) return r > w.grid().extent() ? Scalar(0) : w[w.grid().panels()];
  const Scalar frac = x - Scalar(i);
  return (Scalar(1) - frac) * w[i] + frac * w[i + 1];
}

}  // namespace pohozaev
