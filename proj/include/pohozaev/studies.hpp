#pragma once

// Parameter sweeps, numerical studies, demos and table reproduction built on
// solve(). Everything here is deterministic: results come back in input order
// whatever the number of workers.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pohozaev/solver.hpp"

namespace pohozaev {

namespace reference {

struct PowerRow {
  double lambda;
  double u0;
  double action;
};

/// Heights and actions for f(u) = u^3.
inline constexpr std::array<PowerRow, 5> kPowerHeights{{
    {0.1, 1.37148, 5.97615},
    {0.5, 3.06678, 13.36246},
    {1.0, 4.33691, 18.89734},
    {2.0, 6.13321, 26.72488},
    {3.0, 7.51153, 32.73110},
}};

/// u(0) for f(u) = u^3 / (1 + s u^2); rows are s, columns lambda; 0 marks a
/// cell with lambda s >= 1.
inline constexpr std::array<double, 6> kAsymS{0.1, 0.3, 0.5, 0.7, 1.0, 5.0};
inline constexpr std::array<double, 6> kAsymLambda{0.1, 0.3, 0.5, 0.7, 1.0, 5.0};
inline constexpr std::array<std::array<double, 6>, 6> kAsymHeights{{
    {1.33183, 2.23513, 2.84300, 3.34310, 3.99690, 12.61528},
    {1.29034, 2.18677, 2.87000, 3.51098, 4.50062, 0.0},
    {1.27125, 2.22308, 3.05319, 3.94794, 5.64139, 0.0},
    {1.26344, 2.29849, 3.33592, 4.65516, 8.08286, 0.0},
    {1.26374, 2.46503, 3.98912, 6.76196, 0.0, 0.0},
    {1.78424, 0.0, 0.0, 0.0, 0.0, 0.0},
}};
inline constexpr double kAsymAction = 161.92929;  ///< lambda = 1, s = 0.5

struct ProfilePoint {
  double r;
  double u;
};

/// u(r) for lambda = 1, s = 0.5.
inline constexpr std::array<ProfilePoint, 33> kAsymProfile{{
    {0.000, 5.64139},     {0.100, 5.63348},     {0.201, 5.60837},     {0.302, 5.56672},
    {0.402, 5.50879},     {0.604, 5.34578},     {1.006, 4.84857},     {1.199, 4.54191},
    {1.601, 3.80120},     {2.004, 2.99197},     {2.205, 2.58907},     {2.608, 1.84032},
    {3.002, 1.23610},     {3.203, 0.98899},     {3.605, 0.61708},     {4.007, 0.37890},
    {4.201, 0.29952},     {4.603, 0.18367},     {5.005, 0.11309},     {5.207, 8.88979e-2},
    {5.601, 5.56388e-2},  {6.003, 3.45536e-2},  {6.204, 2.72241e-2},  {6.607, 1.68230e-2},
    {7.000, 1.03282e-2},  {7.202, 7.93701e-3},  {7.604, 4.38170e-3},  {8.007, 1.86676e-3},
    {8.208, 8.34267e-4},  {8.300, 3.91292e-4},  {8.351, 1.55421e-4},  {8.376, 3.87317e-5},
    {8.384, 0.0},
}};

inline constexpr std::size_t kAsymGridPanels = 3500;

}  // namespace reference

/// Builds the model of a family from the flag-style parameters (s for asym and
/// nonmono, B/C/D for quintic).
struct ModelSpec {
  Family family = Family::Power;
  double lambda = 1.0;
  double s = 0.5;
  double B = two_maxima::kB;
  double C = two_maxima::kC;
  double D = two_maxima::kD;

  NonlinearityModel build() const;
};

/// Runs fn(i) for i in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

struct SweepCell {
  double lambda = 0.0;
  double s = 0.0;
  bool feasible = false;
  double u0 = 0.0;
  double action = 0.0;
  double v_norm = 0.0;
  std::string status;  ///< solve status, "infeasible", or "error: ..."
};

/// One asym solve per (s, lambda); rows ordered s-major as given.
std::vector<SweepCell> sweep_asym(const std::vector<double>& lambdas, const std::vector<double>& s_values,
                                  const SolverConfig& config, unsigned workers);

struct ConvergenceRow {
  Index panels = 0;
  double u0 = 0.0;
  double action = 0.0;
  double v_norm = 0.0;
  std::string status;
};

std::vector<ConvergenceRow> convergence_study(const NonlinearityModel& model, const std::vector<Index>& panels,
                                              const SolverConfig& config, unsigned workers);

struct DomainRow {
  double spacing = 0.0;  ///< initial dr
  double r_star = 0.0;
  Index panels = 0;
  double v_norm = 0.0;  ///< ||v|| at the last iterate
  double r_star_final = 0.0;
  long iterations = 0;
  std::string status;
};

/// For each dr and R*, solves on M = round(R* / dr) panels. config.eps_stop
/// decides how far each run is pushed; a run that stalls reports its floor.
std::vector<DomainRow> domain_study(const NonlinearityModel& model, const std::vector<double>& spacings,
                                    const std::vector<double>& r_stars, const SolverConfig& config,
                                    unsigned workers);

/// Least-squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct RobustnessReport {
  SolveResult coarse;
  SolveResult standard;
  double relative_difference = 0.0;  ///< (I_coarse - I_standard) / I_standard
};

/// The coarse run uses M = 31, alpha_min = 1e-2, sor_tol = 1e-2; everything
/// else comes from config, which is also the standard run.
RobustnessReport robustness_study(const NonlinearityModel& model, const SolverConfig& config);

/// Plateau 1/sqrt(4 pi) on r <= R and e^{-(r - R)} / sqrt(4 pi) beyond, sampled
/// with a node at R.
RadialFunctiond two_maxima_profile(double tail_length = 36.925, double spacing = 1e-4);

struct TwoMaximaReport {
  std::vector<FiberPoint> fiber;
  std::vector<FiberPoint> maxima;  ///< refined interior maxima of I(t u)
};

/// Samples I(t u) for the plateau profile on t in (0, t_max] and refines every
/// interior maximum by golden-section search.
TwoMaximaReport two_maxima_fiber(std::size_t samples = 400, double t_max = 8.0);

/// The value both maxima should take: 128 / (25 sqrt 5).
double two_maxima_level();

struct ReproductionRow {
  std::string cell;
  double reference_value = 0.0;
  double computed = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ReproductionReport {
  std::string table;
  std::vector<ReproductionRow> rows;
  bool all_pass() const;
};

/// table is one of power-heights, asym-grid, asym-profile.
ReproductionReport reproduce_table(const std::string& table, const SolverConfig& config, unsigned workers);

/// Relative error |computed - expected| / |expected|.
double relative_error(double computed, double expected);

}  // namespace pohozaev
