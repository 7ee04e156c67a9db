#include "optbench/core.hpp"

#include <cmath>

namespace optbench {

Vec project(const Domain& domain, const Vec& x) {
  switch (domain.kind) {
    case Domain::Kind::full_space:
      return x;
    case Domain::Kind::ball: {
      if (x.size() != domain.center.size())
        throw ConfigurationError("project: point dimension " +
                                 std::to_string(x.size()) +
                                 " does not match ball dimension " +
                                 std::to_string(domain.center.size()));
      const Vec d = x - domain.center;
      const double n = std::sqrt(d.squaredNorm());
      if (n > domain.radius) return domain.center + d * (domain.radius / n);
      return x;
    }
    case Domain::Kind::box: {
      if (x.size() != domain.lower.size())
        throw ConfigurationError("project: point dimension " +
                                 std::to_string(x.size()) +
                                 " does not match box dimension " +
                                 std::to_string(domain.lower.size()));
      return x.cwiseMax(domain.lower).cwiseMin(domain.upper);
    }
  }
  throw ConfigurationError("project: unknown domain kind");
}

double log_plus(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_plus requires x > 0");
  return std::log(x) + 1.0;
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::stationary:
      return "stationary";
    case RunStatus::numeric_overflow:
      return "numeric-overflow";
  }
  return "unknown";
}

RunStatus run_status_from_string(const std::string& s) {
  if (s == "completed") return RunStatus::completed;
  if (s == "stationary") return RunStatus::stationary;
  if (s == "numeric-overflow") return RunStatus::numeric_overflow;
  throw ConfigurationError("unknown run status: " + s);
}

void validate_config(const RunConfig& cfg) {
  const std::string& opt = cfg.optimizer;
  const bool fixed_step = (opt == "gd" || opt == "ngd");
  const bool adaptive = (opt == "dowg" || opt == "dog");
  if (!fixed_step && !adaptive)
    throw ConfigurationError("unknown optimizer: " + opt);
  if (cfg.steps < 0)
    throw ConfigurationError("steps must be nonnegative");
  if (fixed_step) {
    if (!cfg.eta)
      throw ConfigurationError(opt + " requires eta");
    if (!(*cfg.eta > 0.0))
      throw ConfigurationError("eta must be positive");
    if (cfg.r_eps)
      throw ConfigurationError("r_eps is only valid for dowg/dog");
  } else {
    if (!cfg.r_eps)
      throw ConfigurationError(opt + " requires r_eps");
    if (!(*cfg.r_eps > 0.0))
      throw ConfigurationError("r_eps must be positive");
    if (cfg.eta)
      throw ConfigurationError("eta is only valid for gd/ngd");
  }
}

}  // namespace optbench
