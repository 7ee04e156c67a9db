#pragma once

// The acceptance matrix: self-contained end-to-end checks covering figure
// reproduction, every bound verifier on tuned runs, scale-freeness,
// edge-of-stability occupancy, stepsize domination, and the property suites.

#include "optbench/core.hpp"

#include <iosfwd>

namespace optbench {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;
};

/// Runs acceptance criteria 1-10 (criterion 11, byte-level determinism of the
/// CLI, is exercised by invoking the CLI twice; see the acceptance test).
/// Self-contained: builds its own problems and runs.
std::vector<CriterionResult> run_acceptance_matrix();

/// Prints one fixed-format line per criterion; returns true iff all passed.
/// Timings are deliberately omitted so output is byte-stable.
bool print_acceptance(const std::vector<CriterionResult>& results,
                      std::ostream& out);

/// Property suites behind `selftest`: lemma fuzzing, gradient checks,
/// declared-constant checks, convexity spot checks, projection properties,
/// determinism. Prints one line per suite; returns true iff all pass.
bool run_selftest(std::ostream& out);

}  // namespace optbench
