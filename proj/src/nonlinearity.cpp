#include "pohozaev/nonlinearity.hpp"

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "pohozaev/errors.hpp"

namespace pohozaev {

std::string family_id(Family family) {
  switch (family) {
    case Family::Power: return "power";
    case Family::AsymptoticallyLinear: return "asym";
    case Family::Quintic: return "quintic";
    case Family::NonMonotone: return "nonmono";
  }
  return "unknown";
}

Family parse_family(const std::string& id) {
  if (id == "power") return Family::Power;
  if (id == "asym") return Family::AsymptoticallyLinear;
  if (id == "quintic") return Family::Quintic;
  if (id == "nonmono") return Family::NonMonotone;
  throw DomainError("unknown model '" + id + "' (expected power, asym, quintic or nonmono)");
}

NonlinearityModel::NonlinearityModel(std::string name, Family family, double lambda, ScalarFn f_positive,
                                     ScalarFn F_positive, std::map<std::string, double> parameters)
    : name_(std::move(name)),
      family_(family),
      lambda_(lambda),
      f_(std::move(f_positive)),
      F_(std::move(F_positive)),
      parameters_(std::move(parameters)) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw DomainError("lambda must be positive, got " + std::to_string(lambda_));
}

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive, got " + std::to_string(value));
  }
}

// F(u) = int_0^u f, tabulated on [0, kTableEnd] and interpolated with cubic
// Hermite splines using the exact slopes f(u_i). Past the table the remaining
// piece is integrated on demand.
class CumulativePrimitive {
 public:
  static constexpr double kTableEnd = 64.0;
  static constexpr double kStep = 1.0 / 512.0;
  static constexpr double kTolerance = 1e-12;

  explicit CumulativePrimitive(std::function<double(double)> f) : f_(std::move(f)) {
    const auto n = static_cast<std::size_t>(kTableEnd / kStep) + 1;
    std::vector<double> values(n), slopes(n);
    double acc = 0.0;
    values[0] = 0.0;
    slopes[0] = f_(0.0);
    for (std::size_t i = 1; i < n; ++i) {
      acc += integrate((i - 1) * kStep, i * kStep);
      values[i] = acc;
      slopes[i] = f_(i * kStep);
    }
    end_value_ = acc;
    spline_ = std::make_shared<Spline>(std::move(values), std::move(slopes), 0.0, kStep);
  }

  double operator()(double u) const {
    if (u <= kTableEnd) return (*spline_)(u);
    return end_value_ + integrate(kTableEnd, u);
  }

 private:
  using Spline = boost::math::interpolators::cardinal_cubic_hermite<std::vector<double>>;

  double integrate(double a, double b) const {
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f_, a, b, 15, kTolerance, &error);
  }

  std::function<double(double)> f_;
  std::shared_ptr<const Spline> spline_;
  double end_value_ = 0.0;
};

}  // namespace

NonlinearityModel make_power(double lambda) {
  require_positive(lambda, "lambda");
  return NonlinearityModel(
      "power", Family::Power, lambda, [](double u) { return u * u * u; },
      [](double u) { return 0.25 * u * u * u * u; }, {{"p", 3.0}});
}

NonlinearityModel make_asym_linear(double lambda, double s) {
  require_positive(lambda, "lambda");
  require_positive(s, "s");
  if (lambda * s >= 1.0) {
    throw InfeasibleFamilyError("asymptotically linear family needs lambda*s < 1 (lambda s >= 1: lambda=" +
                                std::to_string(lambda) + ", s=" + std::to_string(s) + ")");
  }
  auto f = [s](double u) { return u * u * u / (1.0 + s * u * u); };
  auto F = [s](double u) {
    // (x - log(1 + x)) / (2 s^2) with x = s u^2; series below 1e-3 avoids cancellation
    const double x = s * u * u;
    const double core = x < 1e-3 ? x * x * (0.5 - x * (1.0 / 3.0 - x * (0.25 - x * (0.2 - x / 6.0))))
                                 : x - std::log1p(x);
    return core / (2.0 * s * s);
  };
  return NonlinearityModel("asym", Family::AsymptoticallyLinear, lambda, f, F, {{"s", s}});
}

NonlinearityModel make_quintic(double lambda, double B, double C, double D) {
  require_positive(lambda, "lambda");
  require_positive(B, "B");
  require_positive(C, "C");
  require_positive(D, "D");
  auto f = [B, C, D](double u) { return u * u * (3.0 * B - 4.0 * C * u + 5.0 * D * u * u); };
  auto F = [B, C, D](double u) { return u * u * u * (B - C * u + D * u * u); };
  return NonlinearityModel("quintic", Family::Quintic, lambda, f, F, {{"B", B}, {"C", C}, {"D", D}});
}

NonlinearityModel make_nonmonotone(double lambda, double s) {
  require_positive(lambda, "lambda");
  require_positive(s, "s");
  auto f = [s](double u) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return u3 * (u2 * u2 - 2.5 * u2 + 2.0) / (1.0 + s * u3 * u3);
  };
  CumulativePrimitive F(f);
  return NonlinearityModel("nonmono", Family::NonMonotone, lambda, f, std::move(F), {{"s", s}});
}

bool monotonicity_probe(const NonlinearityModel& model, std::span<const double> u_grid) {
  if (u_grid.size() < 2) return true;
  double previous = model.f(u_grid[0]) / u_grid[0];
  for (std::size_t i = 1; i < u_grid.size(); ++i) {
    const double ratio = model.f(u_grid[i]) / u_grid[i];
    if (ratio < previous - 1e-12 * std::max(1.0, std::abs(previous))) return false;
    previous = ratio;
  }
  return true;
}

}  // namespace pohozaev
