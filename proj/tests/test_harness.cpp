#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <vector>

#include "optbench/analysis.hpp"
#include "optbench/cli.hpp"
#include "optbench/io.hpp"
#include "optbench/svg.hpp"

using namespace optbench;

namespace {

RunReport do_run(const ProblemSpec& spec, const std::string& opt,
                 std::int64_t steps, std::optional<double> eta = {},
                 std::optional<double> r_eps = {}) {
  RunConfig cfg;
  cfg.problem = spec.id;
  cfg.optimizer = opt;
  cfg.steps = steps;
  cfg.eta = eta;
  cfg.r_eps = r_eps;
  cfg.domain = spec.domain;
  return run(cfg, spec.objective, spec.x0);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

int run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"optbench"};
  argv.insert(argv.end(), args.begin(), args.end());
  return cli_run(static_cast<int>(argv.size()), argv.data());
}

bool same_opt(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a || *a == *b;
}

bool records_equal(const StepRecord& a, const StepRecord& b) {
  return a.step == b.step && a.f_value == b.f_value &&
         a.grad_norm == b.grad_norm && a.stepsize == b.stepsize &&
         a.effective_stepsize == b.effective_stepsize &&
         same_opt(a.f_gap, b.f_gap) && same_opt(a.rbar, b.rbar) &&
         same_opt(a.v, b.v) && same_opt(a.distance_to_opt, b.distance_to_opt) &&
         same_opt(a.avg_f_gap, b.avg_f_gap);
}

}  // namespace

TEST_CASE("format_double round-trips every double") {
  const double cases[] = {0.1,
                          1.0 / 3.0,
                          1e300,
                          4.9e-324,  // smallest denormal
                          0.0,
                          12345.678901234567,
                          -2.718281828459045e-5};
  for (const double v : cases) {
    const std::string s = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    CHECK(back == v);
  }
  const std::string neg_zero = format_double(-0.0);
  CHECK(std::signbit(std::strtod(neg_zero.c_str(), nullptr)));
}

TEST_CASE("csv serialization is a bit-exact round trip") {
  const ProblemSpec spec = make_problem("quadratic1d_ball");
  const RunReport rep = do_run(spec, "dowg", 50, {}, 1e-6);
  REQUIRE(rep.records.size() == 50);

  const std::string path = "harness_roundtrip.csv";
  write_csv(rep, path);

  const std::string text = slurp(path);
  CHECK(text.rfind("step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,"
                   "rbar,v,distance_to_opt,avg_f_gap\n",
                   0) == 0);

  const std::vector<StepRecord> parsed = read_csv_records(path);
  REQUIRE(parsed.size() == rep.records.size());
  for (std::size_t i = 0; i < parsed.size(); ++i)
    CHECK(records_equal(parsed[i], rep.records[i]));

  // Re-serializing the parsed records reproduces the file byte for byte.
  RunReport rep2;
  rep2.records = parsed;
  const std::string path2 = "harness_roundtrip2.csv";
  write_csv(rep2, path2);
  CHECK(slurp(path2) == text);

  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("csv keeps optional fields empty for plain gd") {
  const ProblemSpec spec = make_quadratic_1d(100.0);
  const RunReport rep = do_run(spec, "gd", 10, 0.001);
  const std::string path = "harness_gd.csv";
  write_csv(rep, path);
  const std::vector<StepRecord> parsed = read_csv_records(path);
  REQUIRE(parsed.size() == 10);
  for (const StepRecord& r : parsed) {
    CHECK_FALSE(r.rbar.has_value());
    CHECK_FALSE(r.v.has_value());
    CHECK_FALSE(r.avg_f_gap.has_value());
    CHECK(r.f_gap.has_value());           // x* is known
    CHECK(r.distance_to_opt.has_value());
  }
  std::remove(path.c_str());
}

TEST_CASE("csv reader rejects malformed input") {
  const std::string path = "harness_bad.csv";
  CHECK_THROWS_AS(read_csv_records("no_such_file.csv"), ConfigurationError);

  spit(path, "step,wrong,header\n");
  CHECK_THROWS_AS(read_csv_records(path), ConfigurationError);

  const std::string header =
      "step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,"
      "distance_to_opt,avg_f_gap\n";
  spit(path, header + "0,abc,,1,1,1,,,,\n");
  CHECK_THROWS_AS(read_csv_records(path), ConfigurationError);

  spit(path, header + "0,1,2,3,4,5,6,7,8,9,10\n");  // eleven columns
  CHECK_THROWS_AS(read_csv_records(path), ConfigurationError);

  spit(path, "");
  CHECK_THROWS_AS(read_csv_records(path), ConfigurationError);
  std::remove(path.c_str());
}

TEST_CASE("csv reader accepts CRLF files written elsewhere") {
  const std::string path = "harness_crlf.csv";
  spit(path,
       "step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,"
       "distance_to_opt,avg_f_gap\r\n"
       "0,1.5,,2,0.1,0.05,,,,\r\n");
  const std::vector<StepRecord> parsed = read_csv_records(path);
  REQUIRE(parsed.size() == 1);
  CHECK(parsed[0].f_value == 1.5);
  CHECK_FALSE(parsed[0].f_gap.has_value());
  CHECK(parsed[0].grad_norm == 2.0);
  std::remove(path.c_str());
}

TEST_CASE("json report round-trips bit-exactly") {
  const ProblemSpec spec = make_problem("quadratic1d_ball");
  RunReport rep = do_run(spec, "dowg", 40, {}, 1e-6);
  rep.verdicts = run_applicable_verifiers(rep, spec);
  REQUIRE_FALSE(rep.verdicts.empty());

  const std::string path = "harness_report.json";
  write_json(rep, path);
  const RunReport back = read_json_report(path);

  CHECK(back.config.problem == rep.config.problem);
  CHECK(back.config.optimizer == "dowg");
  CHECK(back.config.steps == 40);
  CHECK_FALSE(back.config.eta.has_value());
  CHECK(same_opt(back.config.r_eps, rep.config.r_eps));
  CHECK(back.config.seed == rep.config.seed);
  CHECK(back.config.domain.kind == Domain::Kind::ball);
  CHECK(back.config.domain.radius == rep.config.domain.radius);
  CHECK(back.config.domain.center == rep.config.domain.center);
  CHECK(back.status == rep.status);
  CHECK(back.final_x == rep.final_x);
  CHECK(back.best_x == rep.best_x);
  CHECK(back.best_f == rep.best_f);
  CHECK(back.avg_x == rep.avg_x);
  REQUIRE(back.records.size() == rep.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i)
    CHECK(records_equal(back.records[i], rep.records[i]));
  // Verdicts are exported for human inspection but recomputed on demand.
  CHECK(back.verdicts.empty());
  std::remove(path.c_str());
}

TEST_CASE("json round-trips box domains and eta") {
  ProblemSpec spec = make_quadratic_1d(100.0);
  spec.domain = Domain::make_box(Vec::Constant(1, -0.5), Vec::Constant(1, 2.0));
  const RunReport rep = do_run(spec, "gd", 5, 0.001);
  const std::string path = "harness_box.json";
  write_json(rep, path);
  const RunReport back = read_json_report(path);
  CHECK(back.config.domain.kind == Domain::Kind::box);
  CHECK(back.config.domain.lower == rep.config.domain.lower);
  CHECK(back.config.domain.upper == rep.config.domain.upper);
  CHECK(same_opt(back.config.eta, rep.config.eta));
  std::remove(path.c_str());
}

TEST_CASE("json omits an infinite best_f and restores it on read") {
  const ProblemSpec spec = make_quadratic_1d(100.0);
  const RunReport rep = do_run(spec, "gd", 0, 0.001);  // no steps: best unset
  const std::string text = report_to_json(rep);
  CHECK(text.find("best_f") == std::string::npos);

  const std::string path = "harness_nobest.json";
  spit(path, text);
  const RunReport back = read_json_report(path);
  CHECK(back.best_f == std::numeric_limits<double>::infinity());
  std::remove(path.c_str());
}

TEST_CASE("json reader rejects malformed reports") {
  const std::string path = "harness_badreport.json";
  CHECK_THROWS_AS(read_json_report("no_such_report.json"), ConfigurationError);
  spit(path, "{not json");
  CHECK_THROWS_AS(read_json_report(path), ConfigurationError);
  spit(path, R"({"config":{"problem":"p","optimizer":"gd","steps":1,"seed":0,
      "domain":{"kind":"torus"}},"status":"completed","final_x":[0],
      "best_x":[0],"avg_x":[0],"records":[]})");
  CHECK_THROWS_AS(read_json_report(path), ConfigurationError);
  std::remove(path.c_str());
}

TEST_CASE("verdicts serialize non-finite numbers as strings") {
  BoundVerdict v;
  v.theorem = "ngd_effective_stepsize";
  v.lhs = std::numeric_limits<double>::infinity();
  v.rhs = 0.01;
  v.sense = ">=";
  v.satisfied = true;
  v.inputs = {{"L", 100.0}};
  const nlohmann::json j = nlohmann::json::parse(verdict_to_json(v));
  CHECK(j.at("lhs").is_string());
  CHECK(j.at("lhs").get<std::string>() == "inf");
  CHECK(j.at("rhs").is_number());
  CHECK(j.at("rhs").get<double>() == 0.01);
  CHECK(j.at("satisfied").get<bool>());
  CHECK(j.at("inputs").at("L").get<double>() == 100.0);
}

TEST_CASE("svg charts render the series and escape markup") {
  const std::string path = "harness_chart.svg";
  SvgOptions opts;
  opts.title = "f<gap>&";
  opts.y_label = "f_gap";
  const std::size_t n =
      write_line_chart(path, {0, 1, 2, 3}, {10, 1, 0.1, 0.01}, opts);
  CHECK(n == 4);
  const std::string text = slurp(path);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("</svg>") != std::string::npos);
  CHECK(text.find("<polyline") != std::string::npos);
  CHECK(text.find("f&lt;gap&gt;&amp;") != std::string::npos);
  CHECK(text.find("f<gap>") == std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("svg log scale drops nonpositive and non-finite points") {
  const std::string path = "harness_log.svg";
  SvgOptions opts;
  opts.log_y = true;
  opts.y_label = "f_gap";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t n =
      write_line_chart(path, {0, 1, 2, 3, 4}, {1.0, 0.0, -1.0, 1e-30, nan},
                       opts);
  CHECK(n == 2);  // 1.0 and 1e-30 survive
  const std::string text = slurp(path);
  CHECK(text.find("log scale") != std::string::npos);
  std::remove(path.c_str());

  const std::size_t none = write_line_chart(path, {}, {}, opts);
  CHECK(none == 0);
  CHECK(slurp(path).find("<svg") != std::string::npos);
  std::remove(path.c_str());

  CHECK_THROWS(write_line_chart(path, {1.0}, {}, opts));
}

TEST_CASE("cli run writes parseable csv and json") {
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--steps", "20", "--eta", "0.001", "--out",
                 "harness_cli.csv"}) == 0);
  const std::vector<StepRecord> records = read_csv_records("harness_cli.csv");
  REQUIRE(records.size() == 20);
  CHECK(records[0].f_value == 50.0);
  std::remove("harness_cli.csv");

  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "ngd",
                 "--steps", "100", "--eta-auto", "--format", "json", "--out",
                 "harness_cli.json"}) == 0);
  const RunReport rep = read_json_report("harness_cli.json");
  CHECK(rep.config.problem == "quadratic1d");
  REQUIRE(rep.config.eta.has_value());
  CHECK(*rep.config.eta == 0.1);  // D0/sqrt(T) = 1/10
  CHECK(rep.records.size() == 100);
  std::remove("harness_cli.json");
}

TEST_CASE("cli rejects bad invocations with exit code 2") {
  CHECK(run_cli({"run", "--problem", "nope", "--optimizer", "gd", "--steps",
                 "5", "--eta", "0.1"}) == 2);
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--eta", "0.1"}) == 2);  // --steps is required
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--steps", "5"}) == 2);  // gd needs --eta
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "dowg",
                 "--steps", "5", "--eta", "0.1"}) == 2);  // dowg forbids --eta
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "ngd",
                 "--steps", "5", "--eta", "0.1", "--eta-auto"}) == 2);
  CHECK(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--steps", "5", "--eta", "0.1", "--format", "yaml"}) == 2);
  CHECK(run_cli({"verify"}) == 2);  // needs --all or --theorem
  CHECK(run_cli({"verify", "--theorem", "gd_smooth"}) == 2);  // needs --in
  CHECK(run_cli({"sweep", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--eta", "0.001", "--param", "gamma", "--values", "1,2"}) ==
        2);
  CHECK(run_cli({"frobnicate"}) == 2);
}

TEST_CASE("cli verify --theorem checks a stored report") {
  REQUIRE(run_cli({"run", "--problem", "quadratic1d", "--optimizer", "gd",
                   "--steps", "100", "--eta", "0.001", "--format", "json",
                   "--out", "harness_verify.json"}) == 0);
  CHECK(run_cli({"verify", "--theorem", "gd_smooth", "--in",
                 "harness_verify.json"}) == 0);
  // A not-applicable bound is not a falsification.
  CHECK(run_cli({"verify", "--theorem", "dowg_smooth", "--in",
                 "harness_verify.json"}) == 0);
  CHECK(run_cli({"verify", "--theorem", "nope", "--in",
                 "harness_verify.json"}) == 2);

  // Forging a huge claimed horizon shrinks the bound below the real gap.
  std::string text = slurp("harness_verify.json");
  const std::string needle = "\"steps\": 100";
  const auto pos = text.find(needle);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, needle.size(), "\"steps\": 1000000000000");
  spit("harness_verify.json", text);
  CHECK(run_cli({"verify", "--theorem", "gd_smooth", "--in",
                 "harness_verify.json"}) == 1);
  std::remove("harness_verify.json");
}

TEST_CASE("cli sweep tabulates one row per applicable bound") {
  CHECK(run_cli({"sweep", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--eta", "0.001", "--param", "steps", "--values", "10,20",
                 "--out", "harness_sweep.csv"}) == 0);
  const std::string text = slurp("harness_sweep.csv");
  CHECK(text.rfind("steps,theorem,lhs,rhs,sense,satisfied\n", 0) == 0);
  std::size_t lines = 0;
  for (const char c : text)
    if (c == '\n') ++lines;
  CHECK(lines == 3);  // header + one gd_smooth row per swept value
  CHECK(text.find("10,gd_smooth,") != std::string::npos);
  CHECK(text.find("20,gd_smooth,") != std::string::npos);
  CHECK(text.find(",true\n") != std::string::npos);

  // The table is byte-identical no matter how many workers computed it.
  setenv("OPTBENCH_THREADS", "2", 1);
  CHECK(run_cli({"sweep", "--problem", "quadratic1d", "--optimizer", "gd",
                 "--eta", "0.001", "--param", "steps", "--values", "10,20",
                 "--out", "harness_sweep2.csv"}) == 0);
  unsetenv("OPTBENCH_THREADS");
  CHECK(slurp("harness_sweep2.csv") == text);
  std::remove("harness_sweep.csv");
  std::remove("harness_sweep2.csv");
}

TEST_CASE("cli plot renders a series from csv") {
  REQUIRE(run_cli({"run", "--problem", "quadratic1d_ball", "--optimizer",
                   "dowg", "--steps", "50", "--out", "harness_plot.csv"}) ==
          0);
  CHECK(run_cli({"plot", "--in", "harness_plot.csv", "--series", "f_gap",
                 "--out", "harness_plot.svg", "--log-y"}) == 0);
  CHECK(slurp("harness_plot.svg").find("<svg") != std::string::npos);
  CHECK(run_cli({"plot", "--in", "harness_plot.csv", "--series", "nope",
                 "--out", "harness_plot.svg"}) == 2);
  std::remove("harness_plot.csv");
  std::remove("harness_plot.svg");
}

TEST_CASE("cli selftest passes") {
  CHECK(run_cli({"selftest"}) == 0);
}

TEST_CASE("cli help exits cleanly") {
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"run", "--help"}) == 0);
}
