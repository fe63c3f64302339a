#include "pohozaev/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include <boost/math/tools/minima.hpp>

namespace pohozaev {

NonlinearityModel ModelSpec::build() const {
  switch (family) {
    case Family::Power: return make_power(lambda);
    case Family::AsymptoticallyLinear: return make_asym_linear(lambda, s);
    case Family::Quintic: return make_quintic(lambda, B, C, D);
    case Family::NonMonotone: return make_nonmonotone(lambda, s);
  }
  throw DomainError("unknown model family");
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double relative_error(double computed, double expected) {
  return std::abs(computed - expected) / std::abs(expected);
}

std::vector<SweepCell> sweep_asym(const std::vector<double>& lambdas, const std::vector<double>& s_values,
                                  const SolverConfig& config, unsigned workers) {
  std::vector<SweepCell> cells;
  for (double s : s_values)
    for (double lambda : lambdas) cells.push_back({lambda, s, lambda * s < 1.0, 0.0, 0.0, 0.0, {}});

  parallel_for(cells.size(), workers, [&](std::size_t i) {
    SweepCell& cell = cells[i];
    if (!cell.feasible) {
      cell.status = "infeasible";
      return;
    }
    try {
      const SolveResult r = solve(make_asym_linear(cell.lambda, cell.s), config);
      cell.u0 = r.u_at_zero;
      cell.action = r.action;
      cell.v_norm = r.grad_norm;
      cell.status = status_id(r.status);
    } catch (const std::exception& e) {
      cell.feasible = false;
      cell.status = std::string("error: ") + e.what();
    }
  });
  return cells;
}

std::vector<ConvergenceRow> convergence_study(const NonlinearityModel& model, const std::vector<Index>& panels,
                                              const SolverConfig& config, unsigned workers) {
  std::vector<ConvergenceRow> rows(panels.size());
  parallel_for(panels.size(), workers, [&](std::size_t i) {
    SolverConfig c = config;
    c.panels = panels[i];
    const SolveResult r = solve(model, c);
    rows[i] = {panels[i], r.u_at_zero, r.action, r.grad_norm, status_id(r.status)};
  });
  return rows;
}

std::vector<DomainRow> domain_study(const NonlinearityModel& model, const std::vector<double>& spacings,
                                    const std::vector<double>& r_stars, const SolverConfig& config,
                                    unsigned workers) {
  std::vector<DomainRow> rows;
  for (double dr : spacings) {
    if (!(dr > 0.0)) throw DomainError("domain_study: spacing must be positive");
    for (double r_star : r_stars) {
      const auto panels = static_cast<Index>(std::llround(r_star / dr));
      rows.push_back({dr, r_star, std::max<Index>(panels, RadialGridd::kMinPanels), 0.0, 0.0, 0, {}});
    }
  }
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    DomainRow& row = rows[i];
    SolverConfig c = config;
    c.panels = row.panels;
    c.r_star = row.r_star;
    const SolveResult r = solve(model, c);
    row.v_norm = r.grad_norm;
    row.r_star_final = r.r_star_final();
    row.iterations = r.outer_iterations;
    row.status = r.stalled ? "stalled" : status_id(r.status);
  });
  return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("log_log_slope: x and y differ in length");
  if (x.size() < 2) throw DomainError("log_log_slope: need at least two points");
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log_log_slope: values must be positive");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RobustnessReport robustness_study(const NonlinearityModel& model, const SolverConfig& config) {
  SolverConfig coarse = config;
  coarse.panels = 31;
  coarse.alpha_min = 1e-2;
  coarse.sor_tol = 1e-2;
  RobustnessReport report{solve(model, coarse), solve(model, config), 0.0};
  report.relative_difference = (report.coarse.action - report.standard.action) / report.standard.action;
  return report;
}

RadialFunctiond two_maxima_profile(double tail_length, double spacing) {
  if (!(tail_length > 0.0) || !(spacing > 0.0)) throw DomainError("two_maxima_profile: lengths must be positive");
  const double plateau = two_maxima::kPlateauRadius;
  const auto panels = static_cast<Index>(std::llround((plateau + tail_length) / spacing));
  const RadialGridd grid(panels, plateau + tail_length);
  const double height = 1.0 / std::sqrt(kFourPi<double>);
  return RadialFunctiond::sample(grid, [&](double r) {
    return r <= plateau ? height : height * std::exp(-(r - plateau));
  });
}

double two_maxima_level() { return 128.0 / (25.0 * std::sqrt(5.0)); }

TwoMaximaReport two_maxima_fiber(std::size_t samples, double t_max) {
  if (samples < 3 || !(t_max > 0.0)) throw DomainError("two_maxima_fiber: need at least 3 samples on (0, t_max]");
  const NonlinearityModel model =
      make_quintic(two_maxima::kLambda, two_maxima::kB, two_maxima::kC, two_maxima::kD);
  const RadialFunctiond u = two_maxima_profile();
  const Moments base = moments(model, u);

  // I(t u) is a polynomial in t whose coefficients are moments of u; sampling
  // through the moments of t u keeps the scan cheap.
  const double m3 = ball_integral(u.values().array().cube().matrix(), u.grid());
  const double m4 = ball_integral(u.values().array().square().square().matrix(), u.grid());
  const double m5 = ball_integral((u.values().array().square().square() * u.values().array()).matrix(), u.grid());
  const double quadratic = 0.5 * (base.grad_sq + model.lambda() * base.mass);
  auto fiber = [&](double t) {
    return quadratic * t * t - two_maxima::kB * m3 * t * t * t + two_maxima::kC * m4 * t * t * t * t -
           two_maxima::kD * m5 * t * t * t * t * t;
  };

  TwoMaximaReport report;
  std::vector<double> ts(samples);
  for (std::size_t i = 0; i < samples; ++i) ts[i] = t_max * static_cast<double>(i + 1) / static_cast<double>(samples);
  report.fiber = fiber_scan(model, u, ts);
  const double dt = t_max / static_cast<double>(samples);
  for (std::size_t idx : interior_maxima(report.fiber)) {
    const double t0 = report.fiber[idx].t;
    const auto best = boost::math::tools::brent_find_minima([&](double t) { return -fiber(t); }, t0 - dt, t0 + dt,
                                                            std::numeric_limits<double>::digits / 2);
    report.maxima.push_back({best.first, -best.second});
  }
  return report;
}

bool ReproductionReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReproductionRow& r) { return r.pass; });
}

namespace {

std::string format_cell(const char* label, double value) {
  std::ostringstream out;
  out << label << '=' << std::setprecision(6) << value;
  return out.str();
}

ReproductionRow compare(std::string cell, double reference_value, double computed, double tolerance) {
  const double err = relative_error(computed, reference_value);
  return {std::move(cell), reference_value, computed, err, tolerance, err <= tolerance};
}

}  // namespace

ReproductionReport reproduce_table(const std::string& table, const SolverConfig& config, unsigned workers) {
  ReproductionReport report{table, {}};
  if (table == "power-heights") {
    const auto& rows = reference::kPowerHeights;
    std::vector<std::optional<SolveResult>> results(rows.size());
    parallel_for(rows.size(), workers, [&](std::size_t i) { results[i] = solve(make_power(rows[i].lambda), config); });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string key = format_cell("lambda", rows[i].lambda);
      report.rows.push_back(compare(key + " u0", rows[i].u0, results[i]->u_at_zero, 1e-3));
      report.rows.push_back(compare(key + " I", rows[i].action, results[i]->action, 1e-3));
    }
  } else if (table == "asym-grid") {
    std::vector<double> lambdas(reference::kAsymLambda.begin(), reference::kAsymLambda.end());
    std::vector<double> s_values(reference::kAsymS.begin(), reference::kAsymS.end());
    const auto cells = sweep_asym(lambdas, s_values, config, workers);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const double reference_value = reference::kAsymHeights[i / lambdas.size()][i % lambdas.size()];
      const std::string key = format_cell("s", cells[i].s) + " " + format_cell("lambda", cells[i].lambda);
      if (reference_value == 0.0) {
        // The reference has no solution here; agreement means we also report none.
        report.rows.push_back({key + " (--)", 0.0, cells[i].feasible ? cells[i].u0 : 0.0, 0.0, 0.0,
                               !cells[i].feasible});
      } else {
        report.rows.push_back(compare(key, reference_value, cells[i].feasible ? cells[i].u0 : 0.0, 5e-3));
      }
    }
  } else if (table == "asym-profile") {
    const SolveResult r = solve(make_asym_linear(1.0, 0.5), config);
    for (const auto& p : reference::kAsymProfile) {
      if (p.u == 0.0) continue;  // the reference table's last row is its boundary node
      const double tol = p.u > 1e-2 ? 1e-2 : 0.2;
      report.rows.push_back(compare(format_cell("r", p.r), p.u, interpolate(r.solution, p.r), tol));
    }
  } else {
    throw DomainError("unknown table '" + table + "' (expected power-heights, asym-grid or asym-profile)");
  }
  return report;
}

}  // namespace pohozaev
