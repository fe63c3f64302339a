// Command-line front end: single solves, sweeps, studies, demos and table
// reproduction. Every run writes manifest.json next to its data files.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pohozaev/studies.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pohozaev;

namespace {

enum ExitCode { kOk = 0, kInfeasible = 2, kNonConvergence = 3, kReproductionFailure = 4 };

struct Options {
  std::string model = "power";
  double lambda = 1.0;
  double s = 0.5;
  double B = two_maxima::kB;
  double C = two_maxima::kC;
  double D = two_maxima::kD;
  SolverConfig config;
  std::string omega = "1.9";
  std::string out = "out";
  unsigned parallel = 1;
  unsigned long seed = 0;  // recorded only: every code path is deterministic
};

void add_solver_flags(CLI::App* app, Options& o) {
  app->add_option("--model", o.model, "power | asym | quintic | nonmono")->capture_default_str();
  app->add_option("--lambda", o.lambda, "lambda > 0")->capture_default_str();
  app->add_option("--s", o.s, "s for asym and nonmono")->capture_default_str();
  app->add_option("--B", o.B, "quintic coefficient B");
  app->add_option("--C", o.C, "quintic coefficient C");
  app->add_option("--D", o.D, "quintic coefficient D");
  app->add_option("--panels", o.config.panels, "number of panels M")->capture_default_str();
  app->add_option("--rstar", o.config.r_star, "initial extent R*")->capture_default_str();
  app->add_option("--alpha0", o.config.alpha0, "initial line-search step")->capture_default_str();
  app->add_option("--alpha-min", o.config.alpha_min, "finest line-search step")->capture_default_str();
  app->add_option("--eps", o.config.eps_stop, "stop when ||v|| < eps")->capture_default_str();
  app->add_option("--sor-omega", o.omega, "SOR relaxation in (0, 2), or 'auto' for the optimal value")
      ->capture_default_str();
  app->add_option("--sor-tol", o.config.sor_tol, "SOR residual tolerance")->capture_default_str();
  app->add_option("--reproject-every", o.config.reproject_stride, "reprojection stride N_r")->capture_default_str();
  app->add_option("--max-iterations", o.config.max_outer_iterations, "outer iteration cap")->capture_default_str();
  app->add_option("--guess-amplitude", o.config.guess_amplitude, "initial guess A exp(-sigma r^2): A")
      ->capture_default_str();
  app->add_option("--guess-width", o.config.guess_width, "initial guess: sigma")->capture_default_str();
  app->add_option("--out", o.out, "output directory")->capture_default_str();
  app->add_option("--parallel", o.parallel, "worker threads for independent solves")->capture_default_str();
  app->add_option("--seed", o.seed, "recorded in the manifest; runs are deterministic")->capture_default_str();
}

void resolve_omega(Options& o) {
  if (o.omega == "auto") {
    o.config.sor_auto_omega = true;
    return;
  }
  try {
    std::size_t used = 0;
    o.config.sor_omega = std::stod(o.omega, &used);
    if (used != o.omega.size()) throw std::invalid_argument(o.omega);
  } catch (const std::exception&) {
    throw DomainError("--sor-omega must be a number or 'auto', got '" + o.omega + "'");
  }
}

ModelSpec model_spec(const Options& o) {
  ModelSpec spec;
  spec.family = parse_family(o.model);
  spec.lambda = o.lambda;
  spec.s = o.s;
  spec.B = o.B;
  spec.C = o.C;
  spec.D = o.D;
  return spec;
}

json config_json(const SolverConfig& c) {
  return {{"panels", c.panels},
          {"r_star", c.r_star},
          {"alpha0", c.alpha0},
          {"alpha_min", c.alpha_min},
          {"line_search_cap", c.line_search_cap},
          {"eps_stop", c.eps_stop},
          {"sor_omega", c.sor_auto_omega ? json("auto") : json(c.sor_omega)},
          {"sor_tol", c.sor_tol},
          {"sor_max_iterations", c.sor_max_iterations},
          {"reproject_stride", c.reproject_stride},
          {"max_outer_iterations", c.max_outer_iterations},
          {"t_min", c.t_min},
          {"positivity_tol", c.positivity_tol},
          {"guess_amplitude", c.guess_amplitude},
          {"guess_width", c.guess_width}};
}

json model_json(const NonlinearityModel& m) {
  json params = json::object();
  for (const auto& [k, v] : m.parameters()) params[k] = v;
  return {{"id", family_id(m.family())}, {"name", m.name()}, {"lambda", m.lambda()}, {"parameters", params}};
}

class Run {
 public:
  Run(std::string command, std::vector<std::string> argv, const Options& o)
      : command_(std::move(command)), argv_(std::move(argv)), out_(o.out), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_);
    manifest_["command"] = command_;
    manifest_["argv"] = argv_;
    manifest_["seed"] = o.seed;
    manifest_["config"] = config_json(o.config);
  }

  fs::path path(const std::string& name) {
    outputs_.push_back(name);
    return out_ / name;
  }

  json& manifest() { return manifest_; }

  int finish(int code) {
    manifest_["outputs"] = outputs_;
    manifest_["duration_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    manifest_["exit_status"] = code;
    std::ofstream(out_ / "manifest.json") << manifest_.dump(2) << '\n';
    return code;
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  json manifest_;
  std::vector<std::string> outputs_;
};

std::ofstream open_csv(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

void write_profile(const fs::path& p, const RadialFunctiond& u) {
  auto f = open_csv(p);
  f << "r,u\n" << std::fixed << std::setprecision(5);
  for (Index i = 0; i < u.grid().size(); ++i) f << u.grid().node(i) << ',' << u[i] << '\n';
}

void write_trace(const fs::path& p, const std::vector<TraceRecord>& trace) {
  auto f = open_csv(p);
  f << "iter,I,t_star,alpha,v_norm\n" << std::setprecision(17);
  for (const auto& r : trace) f << r.iteration << ',' << r.action << ',' << r.t_star << ',' << r.alpha << ',' << r.grad_norm << '\n';
}

json result_json(const SolveResult& r) {
  return {{"u0", r.u_at_zero},         {"action", r.action},     {"v_norm", r.grad_norm},
          {"iterations", r.outer_iterations}, {"restarts", r.restarts}, {"status", status_id(r.status)},
          {"R_star_final", r.r_star_final()}};
}

// Writes profile/trace/result for one solve and reports it on stdout.
int emit_solve(Run& run, const NonlinearityModel& model, const SolveResult& r) {
  write_profile(run.path("profile.csv"), r.solution);
  write_trace(run.path("trace.csv"), r.trace);
  std::ofstream(run.path("result.json")) << result_json(r).dump(2) << '\n';
  run.manifest()["model"] = model_json(model);
  run.manifest()["warnings"] = r.warnings;
  std::printf("%s lambda=%g: u0=%.5f I=%.5f ||v||=%.3e iterations=%ld restarts=%d status=%s R*_final=%.4f\n",
              model.name().c_str(), model.lambda(), r.u_at_zero, r.action, r.grad_norm, r.outer_iterations,
              r.restarts, status_id(r.status).c_str(), r.r_star_final());
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  return r.status == SolveStatus::Converged ? kOk : kNonConvergence;
}

int cmd_solve(Run& run, const Options& o) {
  const NonlinearityModel model = model_spec(o).build();
  return emit_solve(run, model, solve(model, o.config));
}

std::string fixed5(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(5) << v;
  return s.str();
}

int cmd_sweep(Run& run, const Options& o, const std::vector<double>& lambdas, const std::vector<double>& s_values) {
  const auto cells = sweep_asym(lambdas, s_values, o.config, o.parallel);
  auto f = open_csv(run.path("grid.csv"));
  f << "s,lambda,u0,I,v_norm,status\n";
  for (const auto& c : cells) {
    f << fixed5(c.s) << ',' << fixed5(c.lambda) << ',';
    if (c.feasible)
      f << fixed5(c.u0) << ',' << fixed5(c.action) << ',' << std::scientific << std::setprecision(5) << c.v_norm
        << std::defaultfloat;
    else
      f << "--,--,--";
    f << ',' << c.status << '\n';
    std::printf("s=%-5g lambda=%-5g %s\n", c.s, c.lambda, c.feasible ? fixed5(c.u0).c_str() : "--");
  }
  run.manifest()["model"] = {{"id", "asym"}, {"lambdas", lambdas}, {"s", s_values}};
  return kOk;
}

int cmd_study(Run& run, Options o, const std::string& kind, const std::vector<Index>& panel_list,
              const std::vector<double>& dr_list, const std::vector<double>& rstar_list, bool eps_given) {
  const NonlinearityModel model = model_spec(o).build();
  run.manifest()["model"] = model_json(model);
  auto f = open_csv(run.path("study.csv"));
  if (kind == "convergence") {
    const auto rows = convergence_study(model, panel_list, o.config, o.parallel);
    f << "M,u0,I,v_norm,status\n";
    for (const auto& r : rows) {
      f << r.panels << ',' << fixed5(r.u0) << ',' << fixed5(r.action) << ',' << std::scientific << std::setprecision(5)
        << r.v_norm << std::defaultfloat << ',' << r.status << '\n';
      std::printf("M=%-6ld u0=%.5f I=%.5f ||v||=%.3e %s\n", static_cast<long>(r.panels), r.u0, r.action, r.v_norm,
                  r.status.c_str());
    }
    return kOk;
  }
  if (kind == "domain") {
    // The study measures where ||v|| stops improving, so runs go to the floor.
    if (!eps_given) o.config.eps_stop = 1e-7;
    const auto rows = domain_study(model, dr_list, rstar_list, o.config, o.parallel);
    f << "dr,R_star,M,v_norm,R_star_final,iterations,status\n";
    for (const auto& r : rows) {
      f << r.spacing << ',' << fixed5(r.r_star) << ',' << r.panels << ',' << std::scientific << std::setprecision(5)
        << r.v_norm << std::defaultfloat << ',' << fixed5(r.r_star_final) << ',' << r.iterations << ',' << r.status
        << '\n';
      std::printf("dr=%-8g R*=%-5g M=%-6ld ||v||=%.3e R*_final=%.3f %s\n", r.spacing, r.r_star,
                  static_cast<long>(r.panels), r.v_norm, r.r_star_final, r.status.c_str());
    }
    for (double dr : dr_list) {
      std::vector<double> x, y;
      for (const auto& r : rows)
        if (r.spacing == dr && r.r_star <= 8.0) {
          x.push_back(r.r_star);
          y.push_back(r.v_norm);
        }
      if (x.size() >= 2) std::printf("dr=%g: log-log slope on R* <= 8: %.3f\n", dr, log_log_slope(x, y));
    }
    return kOk;
  }
  if (kind == "robustness") {
    const RobustnessReport rep = robustness_study(model, o.config);
    f << "run,M,alpha_min,sor_tol,u0,I\n";
    f << "coarse,31,0.01,0.01," << fixed5(rep.coarse.u_at_zero) << ',' << fixed5(rep.coarse.action) << '\n';
    f << "standard," << o.config.panels << ',' << o.config.alpha_min << ',' << o.config.sor_tol << ','
      << fixed5(rep.standard.u_at_zero) << ',' << fixed5(rep.standard.action) << '\n';
    std::printf("coarse I=%.5f standard I=%.5f relative difference %+.4f%%\n", rep.coarse.action,
                rep.standard.action, 100.0 * rep.relative_difference);
    run.manifest()["relative_difference"] = rep.relative_difference;
    return kOk;
  }
  throw CLI::ValidationError("study", "kind must be convergence, domain or robustness");
}

int cmd_demo(Run& run, Options o, const std::string& kind, bool lambda_given, bool s_given) {
  if (kind == "two-maxima") {
    const TwoMaximaReport rep = two_maxima_fiber();
    {
      auto f = open_csv(run.path("fiber.csv"));
      f << "t,I\n" << std::setprecision(17);
      for (const auto& p : rep.fiber) f << p.t << ',' << p.action << '\n';
    }
    std::printf("I(t u): %zu interior maxima (expected level %.5f)\n", rep.maxima.size(), two_maxima_level());
    for (const auto& m : rep.maxima) std::printf("  t=%.5f I=%.5f\n", m.t, m.action);
    run.manifest()["maxima"] = json::array();
    for (const auto& m : rep.maxima) run.manifest()["maxima"].push_back({{"t", m.t}, {"I", m.action}});
    const NonlinearityModel model = make_quintic(two_maxima::kLambda, o.B, o.C, o.D);
    return emit_solve(run, model, solve(model, o.config));
  }
  if (kind == "nonmonotone") {
    if (!lambda_given) o.lambda = 0.5;
    if (!s_given) o.s = 1.0;
    const NonlinearityModel model = make_nonmonotone(o.lambda, o.s);
    std::vector<double> probe;
    {
      auto f = open_csv(run.path("fratio.csv"));
      f << "u,f,f_over_u\n" << std::setprecision(17);
      for (int i = 1; i <= 300; ++i) {
        const double u = 0.01 * i;
        probe.push_back(u);
        f << u << ',' << model.f(u) << ',' << model.f(u) / u << '\n';
      }
    }
    const bool monotone = monotonicity_probe(model, probe);
    std::printf("f(u)/u nondecreasing on (0, 3]: %s\n", monotone ? "true" : "false");
    run.manifest()["monotone"] = monotone;
    return emit_solve(run, model, solve(model, o.config));
  }
  throw CLI::ValidationError("demo", "kind must be two-maxima or nonmonotone");
}

int cmd_reproduce(Run& run, Options o, const std::string& table, bool panels_given) {
  if (!panels_given && table != "power-heights") o.config.panels = reference::kAsymGridPanels;
  run.manifest()["config"] = config_json(o.config);
  const ReproductionReport rep = reproduce_table(table, o.config, o.parallel);
  auto f = open_csv(run.path("report.csv"));
  f << "cell,reference,computed,relative_error,tolerance,pass\n";
  std::printf("%-28s %12s %12s %10s %8s\n", "cell", "reference", "computed", "rel.err", "result");
  for (const auto& r : rep.rows) {
    f << r.cell << ',' << std::setprecision(6) << r.reference_value << ',' << r.computed << ',' << std::scientific
      << std::setprecision(3) << r.relative_error << ',' << r.tolerance << std::defaultfloat << ','
      << (r.pass ? "pass" : "FAIL") << '\n';
    std::printf("%-28s %12.6g %12.6g %9.3f%% %8s\n", r.cell.c_str(), r.reference_value, r.computed, 100.0 * r.relative_error,
                r.pass ? "pass" : "FAIL");
  }
  std::printf("panels=%ld R*=%g\n", static_cast<long>(o.config.panels), o.config.r_star);
  if (rep.all_pass()) return kOk;
  std::fprintf(stderr, "reproduction failed for:");
  for (const auto& r : rep.rows)
    if (!r.pass) std::fprintf(stderr, " [%s]", r.cell.c_str());
  std::fprintf(stderr, "\n");
  return kReproductionFailure;
}

int run_cli(const std::vector<std::string>& args);

// Prints a diagnostic for a failed run and maps it to an exit code.
int report_failure(const std::exception& e) {
  if (dynamic_cast<const InfeasibleFamilyError*>(&e)) {
    std::fprintf(stderr, "infeasible parameters: %s\n", e.what());
    return kInfeasible;
  }
  if (dynamic_cast<const ProjectionInfeasible*>(&e)) {
    std::fprintf(stderr, "infeasible initial guess: %s\n", e.what());
    return kInfeasible;
  }
  if (dynamic_cast<const NonConvergenceError*>(&e) || dynamic_cast<const LineSearchAnomaly*>(&e)) {
    std::fprintf(stderr, "non-convergence: %s\n", e.what());
    return kNonConvergence;
  }
  if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const CLI::ValidationError*>(&e)) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kInfeasible;
  }
  std::fprintf(stderr, "error: %s\n", e.what());
  return 1;
}

int cmd_replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot read " + manifest_path);
  const json m = json::parse(in);
  return run_cli(m.at("argv").get<std::vector<std::string>>());
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Ground states of -Laplace u + lambda u = f(u) in R^3 by minimising the action on the Pohozaev manifold"};
  app.require_subcommand(1);
  Options o;

  auto* solve_cmd = app.add_subcommand("solve", "one solve; writes profile.csv, trace.csv, result.json");
  add_solver_flags(solve_cmd, o);

  std::vector<double> lambdas{0.1, 0.3, 0.5, 0.7, 1.0, 5.0};
  std::vector<double> s_values{0.1, 0.3, 0.5, 0.7, 1.0, 5.0};
  auto* sweep_cmd = app.add_subcommand("sweep", "asym grid over lambda and s; writes grid.csv");
  add_solver_flags(sweep_cmd, o);
  sweep_cmd->add_option("--lambdas", lambdas, "lambda values")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--s-list", s_values, "s values")->delimiter(',')->capture_default_str();

  std::string kind;
  std::vector<Index> panel_list{100, 200, 400, 800, 1600};
  std::vector<double> dr_list{0.00125, 0.0025, 0.005};
  std::vector<double> rstar_list{1, 2, 4, 8, 10, 20};
  auto* study_cmd = app.add_subcommand("study", "convergence | domain | robustness; writes study.csv");
  add_solver_flags(study_cmd, o);
  study_cmd->add_option("kind", kind, "convergence, domain or robustness")->required();
  study_cmd->add_option("--panels-list", panel_list, "M values (convergence)")->delimiter(',')->capture_default_str();
  study_cmd->add_option("--dr-list", dr_list, "initial spacings (domain)")->delimiter(',')->capture_default_str();
  study_cmd->add_option("--rstar-list", rstar_list, "initial extents (domain)")->delimiter(',')->capture_default_str();

  auto* demo_cmd = app.add_subcommand("demo", "two-maxima | nonmonotone");
  add_solver_flags(demo_cmd, o);
  demo_cmd->add_option("kind", kind, "two-maxima or nonmonotone")->required();

  std::string table;
  auto* repro_cmd = app.add_subcommand("reproduce", "power-heights | asym-grid | asym-profile; writes report.csv");
  add_solver_flags(repro_cmd, o);
  repro_cmd->add_option("table", table, "power-heights, asym-grid or asym-profile")->required();

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "rerun the command recorded in a manifest.json");
  replay_cmd->add_option("manifest", manifest_path)->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (replay_cmd->parsed()) return cmd_replay(manifest_path);
    resolve_omega(o);
    o.config.validate();
    auto* cmd = app.get_subcommands().front();
    std::string name = cmd->get_name();
    if (cmd == study_cmd || cmd == demo_cmd) name += " " + kind;
    if (cmd == repro_cmd) name += " " + table;
    Run run(name, args, o);
    int code = kOk;
    try {
      if (cmd == solve_cmd) code = cmd_solve(run, o);
      if (cmd == sweep_cmd) code = cmd_sweep(run, o, lambdas, s_values);
      if (cmd == study_cmd)
        code = cmd_study(run, o, kind, panel_list, dr_list, rstar_list, study_cmd->count("--eps") > 0);
      if (cmd == demo_cmd) code = cmd_demo(run, o, kind, demo_cmd->count("--lambda") > 0, demo_cmd->count("--s") > 0);
      if (cmd == repro_cmd) code = cmd_reproduce(run, o, table, repro_cmd->count("--panels") > 0);
    } catch (const std::exception& e) {
      run.manifest()["error"] = e.what();
      return run.finish(report_failure(e));
    }
    return run.finish(code);
  } catch (const std::exception& e) {
    return report_failure(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return run_cli(args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
