#include "optbench/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "optbench/acceptance.hpp"
#include "optbench/analysis.hpp"
#include "optbench/io.hpp"
#include "optbench/optimizers.hpp"
#include "optbench/problems.hpp"
#include "optbench/svg.hpp"

namespace optbench {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

int worker_threads() {
  const char* env = std::getenv("OPTBENCH_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

/// "full" | "ball:R" (centered at x* when known, else the origin) | "box:a,b"
/// (the cube [a,b]^d).
Domain parse_domain(const std::string& text, const ProblemSpec& spec) {
  if (text == "full") return Domain::full();
  if (text.rfind("ball:", 0) == 0) {
    const double r = std::stod(text.substr(5));
    const Vec center = spec.objective.x_star
                           ? *spec.objective.x_star
                           : Vec(Vec::Zero(spec.objective.dim));
    return Domain::make_ball(center, r);
  }
  if (text.rfind("box:", 0) == 0) {
    const std::string body = text.substr(4);
    const auto comma = body.find(',');
    if (comma == std::string::npos)
      throw ConfigurationError("box domain needs two bounds: box:a,b");
    const double a = std::stod(body.substr(0, comma));
    const double b = std::stod(body.substr(comma + 1));
    return Domain::make_box(Vec::Constant(spec.objective.dim, a),
                            Vec::Constant(spec.objective.dim, b));
  }
  throw ConfigurationError("unknown domain string: " + text +
                           " (expected full, ball:R, or box:a,b)");
}

struct RunFlags {
  std::string problem;
  std::string optimizer;
  std::int64_t steps = 0;
  double eta = 0.0;
  bool has_eta = false;
  bool eta_auto = false;
  double r_eps = 0.0;
  bool has_r_eps = false;
  std::string domain;
  std::uint64_t seed = 0;
};

/// Resolves flags into a ready (problem, config) pair: applies the domain
/// override, fills the DoWG/DoG default r_eps, and computes the tuned
/// stepsize for --eta-auto.
std::pair<ProblemSpec, RunConfig> resolve(const RunFlags& flags) {
  ProblemSpec spec = make_problem(flags.problem, flags.seed);
  RunConfig cfg;
  cfg.problem = flags.problem;
  cfg.optimizer = flags.optimizer;
  cfg.steps = flags.steps;
  cfg.seed = flags.seed;
  cfg.domain =
      flags.domain.empty() ? spec.domain : parse_domain(flags.domain, spec);

  const bool adaptive = flags.optimizer == "dowg" || flags.optimizer == "dog";
  if (flags.has_eta && flags.eta_auto)
    throw ConfigurationError("--eta and --eta-auto are mutually exclusive");
  if (flags.has_eta) cfg.eta = flags.eta;
  if (flags.eta_auto) {
    if (!spec.objective.x_star)
      throw ConfigurationError(
          "--eta-auto needs a problem with a known optimum");
    if (flags.steps < 1) throw ConfigurationError("--eta-auto needs steps >= 1");
    const Vec start = project(cfg.domain, spec.x0);
    const double D0 = (start - *spec.objective.x_star).norm();
    if (!(D0 > 0.0))
      throw ConfigurationError("--eta-auto: start coincides with the optimum");
    cfg.eta = D0 / std::sqrt(static_cast<double>(flags.steps));
  }
  if (flags.has_r_eps) cfg.r_eps = flags.r_eps;
  if (adaptive && !cfg.r_eps) cfg.r_eps = 1e-6;

  validate_config(cfg);
  return {std::move(spec), std::move(cfg)};
}

RunReport execute(const ProblemSpec& spec, const RunConfig& cfg) {
  RunReport report = run(cfg, spec.objective, spec.x0);
  report.verdicts = run_applicable_verifiers(report, spec);
  return report;
}

int cmd_run(const RunFlags& flags, const std::string& out_path,
            const std::string& format) {
  auto [spec, cfg] = resolve(flags);
  const RunReport report = execute(spec, cfg);

  if (format == "csv") {
    if (out_path.empty())
      write_csv(report, std::cout);
    else
      write_csv(report, out_path);
  } else if (format == "json") {
    if (out_path.empty())
      std::cout << report_to_json(report) << "\n";
    else
      write_json(report, out_path);
  } else {
    throw ConfigurationError("unknown format: " + format);
  }

  std::cerr << "run " << cfg.problem << "/" << cfg.optimizer
            << ": status=" << to_string(report.status)
            << " recorded_steps=" << report.records.size()
            << " final_f=" << format_double(
                   spec.objective.value_at(report.final_x))
            << "\n";
  return kExitOk;
}

int cmd_verify_all() {
  const std::vector<CriterionResult> results = run_acceptance_matrix();
  const bool ok = print_acceptance(results, std::cout);
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_verify_theorem(const std::string& theorem, const std::string& in_path) {
  const RunReport report = read_json_report(in_path);
  const ProblemSpec spec =
      make_problem(report.config.problem, report.config.seed);

  BoundVerdict v;
  if (theorem == "gd_nonsmooth") v = verify_gd_nonsmooth(report, spec);
  else if (theorem == "gd_smooth") v = verify_gd_smooth(report, spec);
  else if (theorem == "ngd_nonsmooth") v = verify_ngd_nonsmooth(report, spec);
  else if (theorem == "ngd_smooth") v = verify_ngd_smooth(report, spec);
  else if (theorem == "ngd_effective_stepsize")
    v = verify_ngd_effective_stepsize(report, spec);
  else if (theorem == "dowg_nonsmooth") v = verify_dowg_nonsmooth(report, spec);
  else if (theorem == "dowg_smooth") v = verify_dowg_smooth(report, spec);
  else
    throw ConfigurationError("unknown theorem id: " + theorem);

  std::cout << verdict_to_json(v) << "\n";
  if (!v.applicable) return kExitOk;  // nothing to falsify
  return v.satisfied ? kExitOk : kExitVerificationFailed;
}

int cmd_sweep(const RunFlags& base, const std::string& param,
              const std::string& values_text, const std::string& out_path) {
  std::vector<std::string> values;
  {
    std::stringstream ss(values_text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(item);
  }
  if (values.empty()) throw ConfigurationError("sweep needs --values");
  if (param != "steps" && param != "eta" && param != "r_eps")
    throw ConfigurationError("sweep supports --param steps|eta|r_eps");

  // Resolve each point up front so configuration errors surface before any
  // work starts.
  std::vector<std::pair<ProblemSpec, RunConfig>> points;
  points.reserve(values.size());
  for (const std::string& value : values) {
    RunFlags flags = base;
    if (param == "steps") {
      flags.steps = std::stoll(value);
    } else if (param == "eta") {
      flags.eta = std::stod(value);
      flags.has_eta = true;
      flags.eta_auto = false;
    } else {
      flags.r_eps = std::stod(value);
      flags.has_r_eps = true;
    }
    points.push_back(resolve(flags));
  }

  // Runs are independent and deterministic; threads pull indices from a
  // shared counter and results merge back in input order.
  std::vector<RunReport> reports(points.size());
  const int threads =
      std::min<int>(worker_threads(), static_cast<int>(points.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < points.size(); ++i)
      reports[i] = execute(points[i].first, points[i].second);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < points.size();
             i = next.fetch_add(1))
          reports[i] = execute(points[i].first, points[i].second);
      });
    for (std::thread& th : pool) th.join();
  }

  std::ostringstream table;
  table << param << ",theorem,lhs,rhs,sense,satisfied\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (const BoundVerdict& v : reports[i].verdicts)
      table << values[i] << ',' << v.theorem << ',' << format_double(v.lhs)
            << ',' << format_double(v.rhs) << ',' << v.sense << ','
            << (v.satisfied ? "true" : "false") << '\n';
    if (reports[i].verdicts.empty())
      table << values[i] << ",none,,,,\n";
  }
  if (out_path.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream out(out_path);
    if (!out) throw ConfigurationError("cannot open for writing: " + out_path);
    out << table.str();
  }
  return kExitOk;
}

int cmd_plot(const std::string& in_path, const std::string& series,
             const std::string& out_path, bool log_y) {
  std::vector<StepRecord> records;
  if (in_path.size() >= 5 &&
      in_path.compare(in_path.size() - 5, 5, ".json") == 0) {
    records = read_json_report(in_path).records;
  } else {
    records = read_csv_records(in_path);
  }

  const auto field = [&](const StepRecord& r) -> std::optional<double> {
    if (series == "f_value") return r.f_value;
    if (series == "f_gap") return r.f_gap;
    if (series == "grad_norm") return r.grad_norm;
    if (series == "stepsize") return r.stepsize;
    if (series == "effective_stepsize") return r.effective_stepsize;
    if (series == "rbar") return r.rbar;
    if (series == "v") return r.v;
    if (series == "distance_to_opt") return r.distance_to_opt;
    if (series == "avg_f_gap") return r.avg_f_gap;
    throw ConfigurationError("unknown series: " + series);
  };

  std::vector<double> xs, ys;
  xs.reserve(records.size());
  ys.reserve(records.size());
  for (const StepRecord& r : records) {
    const auto y = field(r);
    if (!y) continue;
    xs.push_back(static_cast<double>(r.step));
    ys.push_back(*y);
  }

  SvgOptions opts;
  opts.title = series;
  opts.y_label = series;
  opts.log_y = log_y;
  const std::size_t rendered = write_line_chart(out_path, xs, ys, opts);
  std::cerr << "plot: rendered " << rendered << " of " << records.size()
            << " records to " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int cli_run(int argc, const char* const* argv) {
  CLI::App app{"Convex optimization testbed: parameter-free and baseline "
               "first-order methods with verifiable convergence bounds"};
  app.require_subcommand(1);

  RunFlags flags;
  std::string out_path, format = "csv", domain_text;
  std::string theorem, in_path, series, param, values_text;
  bool verify_all = false, log_y = false;

  const auto add_common = [&](CLI::App* sub, bool need_steps) {
    sub->add_option("--problem", flags.problem, "problem id (see README)")
        ->required();
    sub->add_option("--optimizer", flags.optimizer, "gd | ngd | dog | dowg")
        ->required();
    auto* steps = sub->add_option("--steps", flags.steps, "iteration budget");
    if (need_steps) steps->required();
    sub->add_option("--eta", flags.eta, "constant stepsize (gd/ngd)");
    sub->add_flag("--eta-auto", flags.eta_auto,
                  "use eta = D0/sqrt(steps) (needs a known optimum)");
    sub->add_option("--r-eps", flags.r_eps,
                    "initial distance estimate (dowg/dog, default 1e-6)");
    sub->add_option("--domain", flags.domain,
                    "feasible set override: full, ball:R, or box:a,b");
    sub->add_option("--seed", flags.seed,
                    "instance seed (0 = frozen default instance)");
  };

  CLI::App* run_cmd = app.add_subcommand("run", "execute one optimization run");
  add_common(run_cmd, true);
  run_cmd->add_option("--out", out_path, "output path (default: stdout)");
  run_cmd->add_option("--format", format, "csv | json");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "check convergence bounds");
  verify_cmd->add_flag("--all", verify_all,
                       "run the full acceptance matrix");
  verify_cmd->add_option("--theorem", theorem, "single bound id");
  verify_cmd->add_option("--in", in_path, "JSON report to check");

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep and tabulate bounds");
  add_common(sweep_cmd, false);
  sweep_cmd->add_option("--param", param, "swept parameter: steps|eta|r_eps")
      ->required();
  sweep_cmd->add_option("--values", values_text, "comma-separated values")
      ->required();
  sweep_cmd->add_option("--out", out_path, "output path (default: stdout)");

  CLI::App* plot_cmd = app.add_subcommand("plot", "render a series as SVG");
  plot_cmd->add_option("--in", in_path, "CSV or JSON report")->required();
  plot_cmd->add_option("--series", series, "record field to plot")->required();
  plot_cmd->add_option("--out", out_path, "SVG output path")->required();
  plot_cmd->add_flag("--log-y", log_y, "logarithmic y axis");

  CLI::App* selftest_cmd =
      app.add_subcommand("selftest", "run the property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // CLI11 stores parsed values through the references above; each handler
  // validates its own semantic constraints.
  try {
    if (run_cmd->parsed()) {
      flags.has_eta = run_cmd->count("--eta") > 0;
      flags.has_r_eps = run_cmd->count("--r-eps") > 0;
      return cmd_run(flags, out_path, format);
    }
    if (verify_cmd->parsed()) {
      if (verify_all == !theorem.empty())
        throw ConfigurationError(
            "verify needs exactly one of --all or --theorem");
      if (verify_all) return cmd_verify_all();
      if (in_path.empty())
        throw ConfigurationError("verify --theorem needs --in report.json");
      return cmd_verify_theorem(theorem, in_path);
    }
    if (sweep_cmd->parsed()) {
      flags.has_eta = sweep_cmd->count("--eta") > 0;
      flags.has_r_eps = sweep_cmd->count("--r-eps") > 0;
      return cmd_sweep(flags, param, values_text, out_path);
    }
    if (plot_cmd->parsed()) return cmd_plot(in_path, series, out_path, log_y);
    if (selftest_cmd->parsed())
      return run_selftest(std::cout) ? kExitOk : kExitVerificationFailed;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GenerationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace optbench
