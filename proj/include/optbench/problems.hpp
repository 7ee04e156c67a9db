#pragma once

// Convex test objectives with analytically known constants (f*, x*, L, G).
// Every instance is generated deterministically from a seed; reference solves
// run once at construction and are cached inside the returned spec.

#include "optbench/core.hpp"

#include <Eigen/Dense>

namespace optbench {

/// A ready-to-run problem: objective, default feasible set, default start
/// point, and which analysis categories apply.
struct ProblemSpec {
  std::string id;
  Objective objective;
  Domain domain;
  Vec x0;
  bool smooth = false;     // smoothness constant L is declared
  bool lipschitz = false;  // Lipschitz constant G is declared
  std::string notes;
};

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

/// f(x) = L x^2 / 2 in one dimension; f* = 0 at x* = 0, smoothness exactly L.
/// Unconstrained by default (not globally Lipschitz; on a radius-R ball it is
/// Lipschitz with G = L*R).
ProblemSpec make_quadratic_1d(double L);

/// f(x) = (1/2n)||Ax - b||^2 + (lambda/2)||x||^2 with A (n x d) and b drawn
/// i.i.d. standard normal scaled by 1/sqrt(d). L = lambda_max(A^T A)/n +
/// lambda via power iteration (relative 1e-8, at most 1e4 sweeps);
/// x* by direct linear solve; f* = f(x*).
ProblemSpec make_ridge_regression(int n, int d, double lambda,
                                  std::uint64_t seed);

/// Ridge on explicit data; used by the CSV loader and by tests with
/// hand-picked matrices.
ProblemSpec make_ridge_from_data(Eigen::MatrixXd A, Vec b, double lambda,
                                 std::string id = "ridge_data");

/// f(x) = (1/n) sum log(1 + exp(-y_i a_i^T x)) + (lambda/2)||x||^2 with
/// labels y_i in {-1,+1} from a random linear teacher. L = lambda_max(A^T A)/
/// (4n) + lambda; x*, f* from a cached gradient-descent reference solve
/// (eta = 1/L, at most 1e6 steps, stop at ||grad|| <= 1e-12).
ProblemSpec make_logistic(int n, int d, double lambda, std::uint64_t seed);

ProblemSpec make_logistic_from_data(Eigen::MatrixXd A, Vec y, double lambda,
                                    std::string id = "logistic_data");

enum class NonsmoothKind { abs_sum, max_affine };

/// Nonsmooth Lipschitz testbeds. abs_sum: f(x) = ||x - c||_1 with G = sqrt(d),
/// x* = c, f* = 0. max_affine: f(x) = max_i (a_i^T x + b_i) over 2d pieces in
/// +/- pairs, G = max_i ||a_i||; x*, f* by an iterated grid search (d <= 2).
/// The default feasible set is a ball of radius 10 around x* so the diameter
/// is known. Piece coefficients are snapped to a dyadic grid (multiples of
/// 2^-20) so that small integer scalings of the objective stay exactly
/// representable.
ProblemSpec make_nonsmooth_lipschitz(NonsmoothKind kind, int d,
                                     std::uint64_t seed);

ProblemSpec make_abs_sum_from_center(Vec c, std::string id = "abs_sum_data");

/// max-affine on explicit pieces (rows of A are the slopes a_i). x*, f* by
/// the same grid-search oracle; requires d <= 2.
ProblemSpec make_max_affine_from_pieces(Eigen::MatrixXd A, Vec b,
                                        std::string id = "max_affine_data");

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Built-in instance names accepted by the CLI and the acceptance matrix.
std::vector<std::string> problem_ids();

/// Builds a registry problem by id. A zero `seed_override` keeps each
/// instance's frozen default seed (results are reproducible out of the box);
/// a nonzero value regenerates the random instances from that seed.
/// Also accepts "csv-ridge:PATH" and "csv-logistic:PATH" to build a problem
/// from a comma-separated design matrix (no header; last column = label).
ProblemSpec make_problem(const std::string& id, std::uint64_t seed_override = 0);

/// Parses a CSV numeric matrix: UTF-8, comma separators, no header. Returns
/// features (all but last column) and labels (last column).
std::pair<Eigen::MatrixXd, Vec> load_csv_matrix(const std::string& path);

/// Wraps a problem as alpha * f: values, gradients, f*, L, G all scale by
/// alpha; x* and the feasible set are unchanged.
ProblemSpec scale_problem(const ProblemSpec& base, double alpha);

}  // namespace optbench
