#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>

namespace pohozaev {

enum class Family { Power, AsymptoticallyLinear, Quintic, NonMonotone };

/// CLI identifier of a family: power, asym, quintic, nonmono.
std::string family_id(Family family);
Family parse_family(const std::string& id);

/// A problem instance -Delta u + lambda u = f(u): the nonlinearity f, its
/// primitive F with F(0) = 0, and lambda. Values at negative arguments use the
/// odd extension of f (F even). Cheap to copy; copies share any cached tables.
class NonlinearityModel {
 public:
  using ScalarFn = std::function<double(double)>;

  NonlinearityModel(std::string name, Family family, double lambda, ScalarFn f_positive,
                    ScalarFn F_positive, std::map<std::string, double> parameters);

  const std::string& name() const noexcept { return name_; }
  Family family() const noexcept { return family_; }
  double lambda() const noexcept { return lambda_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }

  double f(double u) const { return u < 0.0 ? -f_(-u) : f_(u); }
  double F(double u) const { return u < 0.0 ? F_(-u) : F_(u); }

  /// G(u) = -lambda u^2 / 2 + F(u).
  double G(double u) const { return -0.5 * lambda_ * u * u + F(u); }

 private:
  std::string name_;
  Family family_;
  double lambda_;
  ScalarFn f_;
  ScalarFn F_;
  std::map<std::string, double> parameters_;
};

/// f(u) = u^3.
NonlinearityModel make_power(double lambda);

/// f(u) = u^3 / (1 + s u^2). Requires lambda * s < 1.
NonlinearityModel make_asym_linear(double lambda, double s);

/// F(u) = B u^3 - C u^4 + D u^5, f = F'.
NonlinearityModel make_quintic(double lambda, double B, double C, double D);

/// f(u) = (u^7 - 5/2 u^5 + 2 u^3) / (1 + s u^6); F is tabulated numerically.
NonlinearityModel make_nonmonotone(double lambda, double s);

inline double G_eval(const NonlinearityModel& model, double u) { return model.G(u); }

/// True when u -> f(u)/u never decreases between adjacent probe points
/// (beyond a 1e-12 relative slack).
bool monotonicity_probe(const NonlinearityModel& model, std::span<const double> u_grid);

/// Constants of the two-maxima example: a plateau profile of height
/// 1/sqrt(4 pi) on r <= R with an e^{-(r - R)} tail, and quintic coefficients
/// chosen so that t -> I(t u) at lambda = 3 has two equal interior maxima.
/// Derived by scripts/derive_quintic_constants.py and checked by the tests.
namespace two_maxima {
inline constexpr double kLambda = 3.0;
inline constexpr double kPlateauRadius = 3.075;
inline constexpr double kB = 11.185721551629783;
inline constexpr double kC = 12.47625238408888;
inline constexpr double kD = 3.760750959818483;
}  // namespace two_maxima

}  // namespace pohozaev
