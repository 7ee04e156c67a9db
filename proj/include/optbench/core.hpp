#pragma once

// Shared domain types: objectives, feasible sets, projections, per-step
// telemetry, and run configuration. Everything downstream (optimizers,
// problems, analysis, harness) builds on these.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace optbench {

using Vec = Eigen::VectorXd;

/// Thrown for inconsistent configuration (bad dimensions, invalid flag
/// combinations, unknown identifiers).
class ConfigurationError : public std::runtime_error {
 public:
  explicit ConfigurationError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Thrown when deterministic problem generation fails (e.g. the spectral
/// estimate does not converge for a degenerate instance).
class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what)
      : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

/// A convex objective with a value/gradient oracle. For nonsmooth objectives
/// gradient_at returns a subgradient; at kinks where 0 is a valid subgradient
/// the zero element is chosen so that minimizers are exact stationary points.
///
/// Optional analytically-known constants make exact bound verification
/// possible: x_star/f_star (minimizer and optimal value, set together),
/// smoothness L, and Lipschitz constant G (a bound on subgradient norms).
struct Objective {
  int dim = 0;
  std::function<double(const Vec&)> value_at;
  std::function<Vec(const Vec&)> gradient_at;
  std::optional<Vec> x_star;
  std::optional<double> f_star;
  std::optional<double> smoothness;  // L
  std::optional<double> lipschitz;   // G
};

// ---------------------------------------------------------------------------
// Domain
// ---------------------------------------------------------------------------

/// Closed convex feasible set supporting Euclidean projection and a diameter
/// query. Three kinds: all of R^d, a Euclidean ball, or an axis-aligned box.
struct Domain {
  enum class Kind { full_space, ball, box };

  Kind kind = Kind::full_space;
  Vec center;       // ball only
  double radius = 0.0;  // ball only
  Vec lower, upper;     // box only

  static Domain full() { return Domain{}; }

  static Domain make_ball(Vec c, double r) {
    if (!(r > 0.0)) throw ConfigurationError("ball radius must be positive");
    Domain d;
    d.kind = Kind::ball;
    d.center = std::move(c);
    d.radius = r;
    return d;
  }

  static Domain make_box(Vec lo, Vec hi) {
    if (lo.size() != hi.size())
      throw ConfigurationError("box bounds must have equal dimension");
    for (Eigen::Index i = 0; i < lo.size(); ++i)
      if (!(lo[i] <= hi[i]))
        throw ConfigurationError("box lower bound exceeds upper bound");
    Domain d;
    d.kind = Kind::box;
    d.lower = std::move(lo);
    d.upper = std::move(hi);
    return d;
  }

  /// Euclidean diameter: 2r for a ball, ||upper - lower|| for a box, absent
  /// for the unconstrained case.
  std::optional<double> diameter() const {
    switch (kind) {
      case Kind::full_space:
        return std::nullopt;
      case Kind::ball:
        return 2.0 * radius;
      case Kind::box:
        return (upper - lower).norm();
    }
    return std::nullopt;
  }
};

/// Euclidean projection onto the domain. Identity for full_space; radial
/// scaling for the ball; componentwise clamp for the box.
Vec project(const Domain& domain, const Vec& x);

/// log_+(x) = log(x) + 1 (natural logarithm). Requires x > 0.
double log_plus(double x);

// ---------------------------------------------------------------------------
// Telemetry
// ---------------------------------------------------------------------------

/// One telemetry row per iteration, taken at the pre-step iterate x_t.
/// Optional fields are populated only when defined for the optimizer
/// (rbar/v/avg_f_gap) or when the problem's constants are known
/// (f_gap/distance_to_opt).
struct StepRecord {
  std::int64_t step = 0;
  double f_value = 0.0;
  std::optional<double> f_gap;        // f(x_t) - f*, when f* known
  double grad_norm = 0.0;
  double stepsize = 0.0;              // eta or eta_t
  double effective_stepsize = 0.0;    // eta/||grad|| for NGD, = stepsize otherwise
  std::optional<double> rbar;         // distance estimator (DoWG/DoG)
  std::optional<double> v;            // weighted gradient sum (DoWG)
  std::optional<double> distance_to_opt;  // ||x_t - x*||, when x* known
  std::optional<double> avg_f_gap;    // gap at the weighted-average iterate (DoWG)
};

enum class RunStatus { completed, stationary, numeric_overflow };

std::string to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

/// Fully-resolved description of one optimization run. `domain` is the actual
/// feasible set used (a problem's default, possibly overridden at the CLI).
/// `seed` feeds problem-instance generation only; the runs themselves are
/// deterministic.
struct RunConfig {
  std::string problem;
  std::string optimizer;  // "gd" | "ngd" | "dog" | "dowg"
  std::int64_t steps = 0;
  std::optional<double> eta;    // GD/NGD only
  std::optional<double> r_eps;  // DoWG/DoG only (default 1e-6)
  std::uint64_t seed = 0;
  Domain domain;
};

/// Validates the eta/r_eps pairing rules; throws ConfigurationError.
void validate_config(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

/// Result of checking one convergence bound against an observed run.
/// `satisfied` means lhs <= rhs * (1 + 1e-9) for the usual sense; a few
/// checks are lower bounds and use the inverted sense (lhs >= rhs * (1 - 1e-9)),
/// indicated by `sense`. `inputs` records the constants that entered the
/// bound (T, eta, D0, D, L, G, r_eps) for reproducibility.
struct BoundVerdict {
  std::string theorem;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  bool applicable = true;
  std::string sense = "<=";  // "<=" or ">="
  std::string note;          // e.g. "stationary", or why not applicable
  std::map<std::string, double> inputs;
};

/// Relative slack used by all bound comparisons.
inline constexpr double kBoundRelSlack = 1e-9;

inline bool bound_holds_le(double lhs, double rhs) {
  return lhs <= rhs * (1.0 + kBoundRelSlack);
}
inline bool bound_holds_ge(double lhs, double rhs) {
  return lhs >= rhs * (1.0 - kBoundRelSlack);
}

}  // namespace optbench
