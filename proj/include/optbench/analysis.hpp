#pragma once

// Numerical verification of the convergence guarantees: bound checkers for
// each theorem-shaped claim, sequence-inequality oracles, a smoothness
// consequence check, and the edge-of-stability detector.

#include "optbench/optimizers.hpp"
#include "optbench/problems.hpp"

#include <utility>

namespace optbench {

// Theorem identifiers used in verdicts and by `verify --theorem`:
//   gd_nonsmooth            averaged-iterate bound for GD on Lipschitz problems
//   gd_smooth               last-iterate bound for GD on smooth problems
//   ngd_nonsmooth           best-iterate bound for NGD on Lipschitz problems
//   ngd_smooth              best-iterate bound for NGD on smooth problems
//   ngd_effective_stepsize  lower bound on the max effective stepsize of NGD
//   dowg_nonsmooth          weighted-average bound for DoWG on Lipschitz problems
//   dowg_smooth             weighted-average bound for DoWG on smooth problems
std::vector<std::string> theorem_ids();

/// GD, Lipschitz case: f(mean of iterates) - f* <= D0^2/(eta T) + eta G^2 / 2.
BoundVerdict verify_gd_nonsmooth(const RunReport& report, const ProblemSpec& spec);

/// GD, smooth case (eta < 2/L): f(x_T) - f* <= 2 L D0^2 / (4 + T eta L (2 - L eta)).
BoundVerdict verify_gd_smooth(const RunReport& report, const ProblemSpec& spec);

/// NGD, Lipschitz case: min_k f(x_k) - f* <= G (D0^2/(2 eta T) + eta/2).
BoundVerdict verify_ngd_nonsmooth(const RunReport& report, const ProblemSpec& spec);

/// NGD, smooth case: min_k f(x_k) - f* <= 2 L (D0^2/(2 eta T) + eta/2)^2;
/// when eta = D0/sqrt(T) the simplified form 2 L D0^2 / T is checked as well.
BoundVerdict verify_ngd_smooth(const RunReport& report, const ProblemSpec& spec);

/// NGD with eta = D0/sqrt(T) on a smooth problem: max_t effective_stepsize
/// >= (1/L) * (1 - 1e-9). Inverted sense (a lower bound).
BoundVerdict verify_ngd_effective_stepsize(const RunReport& report,
                                           const ProblemSpec& spec);

/// DoWG, Lipschitz case over a compact domain:
/// min_t f(xbar_t) - f* <= 16 (G D / sqrt(T)) log_+(D / r_eps).
BoundVerdict verify_dowg_nonsmooth(const RunReport& report, const ProblemSpec& spec);

/// DoWG, smooth case over a compact domain:
/// min_t f(xbar_t) - f* <= 64 e (L D^2 / T) log_+(D / r_eps).
BoundVerdict verify_dowg_smooth(const RunReport& report, const ProblemSpec& spec);

/// Runs every verifier whose preconditions match the report; returns the
/// applicable verdicts in a fixed order.
std::vector<BoundVerdict> run_applicable_verifiers(const RunReport& report,
                                                   const ProblemSpec& spec);

/// Samples n_points around the optimum (projected onto the domain) and checks
/// the smoothness consequence ||grad f(x)||^2 <= 2 L (f(x) - f*) with
/// relative slack 1e-9 at every point.
bool check_smoothness_fact(const ProblemSpec& spec, int n_points,
                           std::uint64_t seed);

/// For a nondecreasing nonnegative sequence a_0..a_t returns
/// (sum_{k>=1} (a_k - a_{k-1})/sqrt(a_k), 2 (sqrt(a_t) - sqrt(a_0))).
/// Zero increments contribute zero even when a_k = 0.
std::pair<double, double> lemma_seq_check(const std::vector<double>& a);

/// For a positive increasing sequence s_0..s_T returns
/// (max_{1<=t<=T} sum_{i<t} s_i / s_t, (1/e)(T / log_+(s_T/s_0) - 1)).
std::pair<double, double> lemma_logT_check(const std::vector<double>& s);

/// Edge-of-stability summary over the trailing window of a run.
struct EosSummary {
  double mean_eff_L = 0.0;      // mean of effective_stepsize * L in the window
  double min_eff_L = 0.0;
  double max_eff_L = 0.0;
  double band_fraction = 0.0;   // fraction of window steps with eff*L in [1, 2.5]
  double max_eff_all = 0.0;     // max effective_stepsize over the whole run
  std::int64_t window_steps = 0;
};

/// Stability band in units of 1/L and the occupancy gate used by acceptance.
inline constexpr double kEosBandLo = 1.0;
inline constexpr double kEosBandHi = 2.5;

/// Computes the summary over the last window_frac of recorded steps.
/// Requires a smooth problem (known L) and a nonempty record set.
EosSummary detect_edge_of_stability(const RunReport& report,
                                    const ProblemSpec& spec,
                                    double window_frac);

/// Exact stepsize-domination check on a recorded DoWG trajectory: evaluates
/// both adaptive stepsize formulas from the recorded (rbar_k, ||g_k||)
/// history in algebraically common form and confirms eta_DoG,t <= eta_DoWG,t
/// for every t with no tolerance.
bool check_stepsize_domination(const RunReport& report);

}  // namespace optbench
