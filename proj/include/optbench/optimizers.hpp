#pragma once

// First-order optimizers: projected gradient descent (GD), normalized
// gradient descent (NGD), and the two distance-estimating adaptive methods
// DoG and DoWG. Each exposes a single-step transition plus a driver that
// executes a full run and collects telemetry.

#include "optbench/core.hpp"

#include <limits>

namespace optbench {

// ---------------------------------------------------------------------------
// Per-algorithm state
// ---------------------------------------------------------------------------

struct GdState {
  Vec x;
  double eta = 0.0;
};

struct NgdState {
  Vec x;
  double eta = 0.0;
  // Best observed iterate by f-value (tracking needs no f*; gaps are derived
  // at reporting time when f* is known).
  double best_f = std::numeric_limits<double>::infinity();
  Vec best_x;
};

struct DowgState {
  Vec x;
  Vec x0;
  double rbar = 0.0;     // running max of ||x_t - x0||, seeded with r_eps
  double v = 0.0;        // sum of rbar_k^2 * ||g_k||^2
  Vec avg_num;           // sum of rbar_k^2 * x_k
  double avg_den = 0.0;  // sum of rbar_k^2
  double r_eps = 0.0;
};

struct DogState {
  Vec x;
  Vec x0;
  double rbar = 0.0;
  double grad_sq_sum = 0.0;  // sum of ||g_k||^2, including the current step
  double r_eps = 0.0;
};

GdState make_gd_state(const Vec& x0, double eta);
NgdState make_ngd_state(const Vec& x0, double eta);
DowgState make_dowg_state(const Vec& x0, double r_eps);
DogState make_dog_state(const Vec& x0, double r_eps);

// ---------------------------------------------------------------------------
// Single-step transitions
// ---------------------------------------------------------------------------

/// Outcome of one optimizer step. `stationary` means the gradient vanished at
/// the current iterate before the move; the state's x is unchanged and no
/// record is produced (a convex function with zero subgradient is minimized
/// there, so the run ends successfully). `overflow` flags non-finite values.
/// `f_observed` is f at the pre-step iterate (set whenever f was evaluated,
/// including the stationary case) so the driver can track best iterates.
struct StepOutcome {
  std::optional<StepRecord> record;
  bool stationary = false;
  bool overflow = false;
  double f_observed = std::numeric_limits<double>::quiet_NaN();
};

StepOutcome gd_step(GdState& s, const Objective& obj, const Domain& dom,
                    std::int64_t step);
StepOutcome ngd_step(NgdState& s, const Objective& obj, const Domain& dom,
                     std::int64_t step);
StepOutcome dowg_step(DowgState& s, const Objective& obj, const Domain& dom,
                      std::int64_t step);
StepOutcome dog_step(DogState& s, const Objective& obj, const Domain& dom,
                     std::int64_t step);

// ---------------------------------------------------------------------------
// Full runs
// ---------------------------------------------------------------------------

/// Full trajectory of one run plus derived summaries. `trajectory` holds the
/// iterates x_0 .. x_last in memory (not serialized). `avg_x` is the uniform
/// mean of visited iterates for GD/NGD/DoG and the rbar^2-weighted mean for
/// DoWG. `best_x`/`best_f` track the minimum f over iterates at which a
/// gradient was evaluated.
struct RunReport {
  RunConfig config;
  std::vector<StepRecord> records;
  RunStatus status = RunStatus::completed;
  Vec final_x;
  Vec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  Vec avg_x;
  std::vector<Vec> trajectory;
  std::vector<BoundVerdict> verdicts;
};

/// Iterate limit beyond which a run is declared numerically divergent.
inline constexpr double kOverflowNorm = 1e12;

/// Executes cfg.steps optimizer steps from x0 (projected onto cfg.domain
/// first), or stops early with status "stationary" (zero gradient) or
/// "numeric-overflow" (non-finite values or ||x|| > 1e12). Deterministic:
/// identical inputs produce bit-identical reports.
RunReport run(const RunConfig& cfg, const Objective& obj, const Vec& x0);

}  // namespace optbench
