#include "optbench/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace optbench {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "step,f_value,f_gap,grad_norm,stepsize,effective_stepsize,rbar,v,"
    "distance_to_opt,avg_f_gap";

std::string opt_cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// JSON numbers cannot express inf/nan; encode those as strings so nothing
// silently turns into null.
json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ConfigurationError("malformed numeric field in JSON report");
}

json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const json& arr) {
  Vec v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& x : arr) v[i++] = number_from(x);
  return v;
}

json domain_to_json(const Domain& d) {
  json j;
  switch (d.kind) {
    case Domain::Kind::full_space:
      j["kind"] = "full_space";
      break;
    case Domain::Kind::ball:
      j["kind"] = "ball";
      j["center"] = vec_to_json(d.center);
      j["radius"] = d.radius;
      break;
    case Domain::Kind::box:
      j["kind"] = "box";
      j["lower"] = vec_to_json(d.lower);
      j["upper"] = vec_to_json(d.upper);
      break;
  }
  return j;
}

Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "full_space") return Domain::full();
  if (kind == "ball")
    return Domain::make_ball(vec_from_json(j.at("center")),
                             number_from(j.at("radius")));
  if (kind == "box")
    return Domain::make_box(vec_from_json(j.at("lower")),
                            vec_from_json(j.at("upper")));
  throw ConfigurationError("unknown domain kind in JSON report: " + kind);
}

json record_to_json(const StepRecord& r) {
  json j;
  j["step"] = r.step;
  j["f_value"] = json_number(r.f_value);
  j["grad_norm"] = json_number(r.grad_norm);
  j["stepsize"] = json_number(r.stepsize);
  j["effective_stepsize"] = json_number(r.effective_stepsize);
  if (r.f_gap) j["f_gap"] = json_number(*r.f_gap);
  if (r.rbar) j["rbar"] = json_number(*r.rbar);
  if (r.v) j["v"] = json_number(*r.v);
  if (r.distance_to_opt) j["distance_to_opt"] = json_number(*r.distance_to_opt);
  if (r.avg_f_gap) j["avg_f_gap"] = json_number(*r.avg_f_gap);
  return j;
}

StepRecord record_from_json(const json& j) {
  StepRecord r;
  r.step = j.at("step").get<std::int64_t>();
  r.f_value = number_from(j.at("f_value"));
  r.grad_norm = number_from(j.at("grad_norm"));
  r.stepsize = number_from(j.at("stepsize"));
  r.effective_stepsize = number_from(j.at("effective_stepsize"));
  if (j.contains("f_gap")) r.f_gap = number_from(j.at("f_gap"));
  if (j.contains("rbar")) r.rbar = number_from(j.at("rbar"));
  if (j.contains("v")) r.v = number_from(j.at("v"));
  if (j.contains("distance_to_opt"))
    r.distance_to_opt = number_from(j.at("distance_to_opt"));
  if (j.contains("avg_f_gap")) r.avg_f_gap = number_from(j.at("avg_f_gap"));
  return r;
}

json verdict_to_json_obj(const BoundVerdict& v) {
  json j;
  j["theorem"] = v.theorem;
  j["lhs"] = json_number(v.lhs);
  j["rhs"] = json_number(v.rhs);
  j["satisfied"] = v.satisfied;
  j["applicable"] = v.applicable;
  j["sense"] = v.sense;
  if (!v.note.empty()) j["note"] = v.note;
  json inputs;
  for (const auto& [key, value] : v.inputs) inputs[key] = json_number(value);
  j["inputs"] = std::move(inputs);
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const RunReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const StepRecord& r : report.records) {
    out << r.step << ',' << format_double(r.f_value) << ','
        << opt_cell(r.f_gap) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.stepsize) << ','
        << format_double(r.effective_stepsize) << ',' << opt_cell(r.rbar)
        << ',' << opt_cell(r.v) << ',' << opt_cell(r.distance_to_opt) << ','
        << opt_cell(r.avg_f_gap) << '\n';
  }
}

void write_csv(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot open for writing: " + path);
  write_csv(report, out);
}

std::vector<StepRecord> read_csv_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ConfigurationError("empty CSV file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader)
    throw ConfigurationError("unexpected CSV header in " + path);

  const auto parse_opt = [](const std::string& cell) -> std::optional<double> {
    if (cell.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size())
      throw ConfigurationError("bad numeric cell: " + cell);
    return v;
  };

  std::vector<StepRecord> records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    // A trailing empty field is dropped by getline; restore it.
    while (cells.size() < 10) cells.emplace_back();
    if (cells.size() != 10)
      throw ConfigurationError("wrong CSV column count in " + path);
    StepRecord r;
    r.step = std::stoll(cells[0]);
    r.f_value = *parse_opt(cells[1]);
    r.f_gap = parse_opt(cells[2]);
    r.grad_norm = *parse_opt(cells[3]);
    r.stepsize = *parse_opt(cells[4]);
    r.effective_stepsize = *parse_opt(cells[5]);
    r.rbar = parse_opt(cells[6]);
    r.v = parse_opt(cells[7]);
    r.distance_to_opt = parse_opt(cells[8]);
    r.avg_f_gap = parse_opt(cells[9]);
    records.push_back(std::move(r));
  }
  return records;
}

std::string report_to_json(const RunReport& report) {
  json j;
  json cfg;
  cfg["problem"] = report.config.problem;
  cfg["optimizer"] = report.config.optimizer;
  cfg["steps"] = report.config.steps;
  if (report.config.eta) cfg["eta"] = json_number(*report.config.eta);
  if (report.config.r_eps) cfg["r_eps"] = json_number(*report.config.r_eps);
  cfg["seed"] = report.config.seed;
  cfg["domain"] = domain_to_json(report.config.domain);
  j["config"] = std::move(cfg);
  j["status"] = to_string(report.status);
  j["final_x"] = vec_to_json(report.final_x);
  j["best_x"] = vec_to_json(report.best_x);
  if (std::isfinite(report.best_f)) j["best_f"] = report.best_f;
  j["avg_x"] = vec_to_json(report.avg_x);
  json recs = json::array();
  for (const StepRecord& r : report.records) recs.push_back(record_to_json(r));
  j["records"] = std::move(recs);
  json verdicts = json::array();
  for (const BoundVerdict& v : report.verdicts)
    verdicts.push_back(verdict_to_json_obj(v));
  j["verdicts"] = std::move(verdicts);
  return j.dump(2);
}

void write_json(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigurationError("cannot open for writing: " + path);
  out << report_to_json(report) << '\n';
}

RunReport read_json_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open JSON file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigurationError(std::string("JSON parse error: ") + e.what());
  }
  RunReport report;
  const json& cfg = j.at("config");
  report.config.problem = cfg.at("problem").get<std::string>();
  report.config.optimizer = cfg.at("optimizer").get<std::string>();
  report.config.steps = cfg.at("steps").get<std::int64_t>();
  if (cfg.contains("eta")) report.config.eta = number_from(cfg.at("eta"));
  if (cfg.contains("r_eps")) report.config.r_eps = number_from(cfg.at("r_eps"));
  report.config.seed = cfg.at("seed").get<std::uint64_t>();
  report.config.domain = domain_from_json(cfg.at("domain"));
  report.status = run_status_from_string(j.at("status").get<std::string>());
  report.final_x = vec_from_json(j.at("final_x"));
  report.best_x = vec_from_json(j.at("best_x"));
  report.best_f = j.contains("best_f")
                      ? number_from(j.at("best_f"))
                      : std::numeric_limits<double>::infinity();
  report.avg_x = vec_from_json(j.at("avg_x"));
  for (const auto& rec : j.at("records"))
    report.records.push_back(record_from_json(rec));
  return report;
}

std::string verdict_to_json(const BoundVerdict& v) {
  return verdict_to_json_obj(v).dump(2);
}

}  // namespace optbench
