#include "optbench/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace optbench {

namespace {

// Frozen seeds for the built-in instances. Chosen once so that the registry
// is reproducible out of the box; any nonzero CLI --seed regenerates. The
// ridge seed was picked so that the long-horizon normalized-descent limit
// cycle sits well inside the [1/L, 2.5/L] stability band rather than
// straddling its edge.
constexpr std::uint64_t kRidgeSeed = 5;
constexpr std::uint64_t kLogisticSeed = 5;
constexpr std::uint64_t kAbsSumSeed = 11;
constexpr std::uint64_t kMaxAffineSeed = 13;

// Registry defaults for the random instances.
constexpr int kRidgeN = 60, kRidgeD = 12;
constexpr int kLogisticN = 40, kLogisticD = 8;
constexpr double kDefaultLambda = 1e-2;

double power_iteration_lambda_max(const Eigen::MatrixXd& M) {
  // Largest eigenvalue of a symmetric PSD matrix, relative tolerance 1e-8.
  const int max_iters = 10000;
  const double rel_tol = 1e-8;
  std::mt19937_64 eng(0x5ca1ab1e);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(M.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = normal(eng);
  const double vn = v.norm();
  if (!(vn > 0.0)) throw GenerationError("power iteration: zero start vector");
  v /= vn;
  double lambda_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = M * v;
    const double wn = w.norm();
    if (!(wn > 0.0))
      throw GenerationError("power iteration: matrix annihilated the iterate");
    const double lambda = v.dot(w);
    v = w / wn;
    if (it > 0 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda))
      return lambda;
    lambda_prev = lambda;
  }
  throw GenerationError("power iteration did not converge in 10^4 iterations");
}

Eigen::MatrixXd random_matrix_scaled(int n, int d, std::mt19937_64& eng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Eigen::MatrixXd A(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = normal(eng) * scale;
  return A;
}

// log(1 + exp(z)) without overflow for large |z|.
double log1p_exp(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Snaps z to the dyadic grid of multiples of 2^-20, so that small integer
// scalings (like 100*z) remain exactly representable doubles.
double dyadic(double z) {
  return std::round(z * 1048576.0) / 1048576.0;
}

// Iterated grid search for the minimizer of f over a centered square; the
// independent oracle for max-affine optima in d <= 2.
std::pair<Vec, double> grid_minimize(const std::function<double(const Vec&)>& f,
                                     int dim, double half_width, int rounds) {
  const int pts = 201;
  Vec center = Vec::Zero(dim);
  Vec best_x = center;
  double best_f = f(center);
  double h = half_width;
  for (int round = 0; round < rounds; ++round) {
    Vec probe(dim);
    if (dim == 1) {
      for (int i = 0; i < pts; ++i) {
        probe[0] = center[0] - h + 2.0 * h * i / (pts - 1);
        const double fv = f(probe);
        if (fv < best_f) {
          best_f = fv;
          best_x = probe;
        }
      }
    } else {
      for (int i = 0; i < pts; ++i) {
        probe[0] = center[0] - h + 2.0 * h * i / (pts - 1);
        for (int j = 0; j < pts; ++j) {
          probe[1] = center[1] - h + 2.0 * h * j / (pts - 1);
          const double fv = f(probe);
          if (fv < best_f) {
            best_f = fv;
            best_x = probe;
          }
        }
      }
    }
    center = best_x;
    h = 2.0 * (2.0 * h / (pts - 1));  // zoom to twice the previous cell size
  }
  return {best_x, best_f};
}

}  // namespace

ProblemSpec make_quadratic_1d(double L) {
  if (!(L > 0.0)) throw ConfigurationError("quadratic requires L > 0");
  ProblemSpec spec;
  spec.id = "quadratic1d";
  spec.objective.dim = 1;
  spec.objective.value_at = [L](const Vec& x) {
    return 0.5 * L * x.squaredNorm();
  };
  spec.objective.gradient_at = [L](const Vec& x) { return Vec(L * x); };
  spec.objective.x_star = Vec::Zero(1);
  spec.objective.f_star = 0.0;
  spec.objective.smoothness = L;
  spec.domain = Domain::full();
  spec.x0 = Vec::Constant(1, 1.0);
  spec.smooth = true;
  spec.lipschitz = false;
  spec.notes =
      "smooth (L exact); not globally Lipschitz -- on a radius-R ball it is "
      "Lipschitz with G = L*R";
  return spec;
}

ProblemSpec make_ridge_from_data(Eigen::MatrixXd A, Vec b, double lambda,
                                 std::string id) {
  if (!(lambda > 0.0)) throw ConfigurationError("ridge requires lambda > 0");
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (n < 1 || d < 1) throw ConfigurationError("ridge requires n, d >= 1");
  if (b.size() != n) throw ConfigurationError("ridge: label length mismatch");

  auto Ap = std::make_shared<Eigen::MatrixXd>(std::move(A));
  auto bp = std::make_shared<Vec>(std::move(b));

  ProblemSpec spec;
  spec.id = std::move(id);
  spec.objective.dim = d;
  spec.objective.value_at = [Ap, bp, lambda, n](const Vec& x) {
    const Vec r = (*Ap) * x - (*bp);
    return 0.5 / n * r.squaredNorm() + 0.5 * lambda * x.squaredNorm();
  };
  spec.objective.gradient_at = [Ap, bp, lambda, n](const Vec& x) {
    const Vec r = (*Ap) * x - (*bp);
    return Vec(Ap->transpose() * r / n + lambda * x);
  };

  const Eigen::MatrixXd AtA = Ap->transpose() * (*Ap);
  spec.objective.smoothness = power_iteration_lambda_max(AtA) / n + lambda;

  Eigen::MatrixXd M = AtA / n;
  M.diagonal().array() += lambda;
  const Vec rhs = Ap->transpose() * (*bp) / n;
  const Vec x_star = M.ldlt().solve(rhs);
  spec.objective.x_star = x_star;
  spec.objective.f_star = spec.objective.value_at(x_star);

  spec.domain = Domain::full();
  spec.x0 = Vec::Zero(d);
  spec.smooth = true;
  spec.notes = "smooth strongly convex; L from power iteration";
  return spec;
}

ProblemSpec make_ridge_regression(int n, int d, double lambda,
                                  std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigurationError("ridge requires n, d >= 1");
  std::mt19937_64 eng(seed);
  Eigen::MatrixXd A = random_matrix_scaled(n, d, eng);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = normal(eng) * scale;
  return make_ridge_from_data(std::move(A), std::move(b), lambda, "ridge");
}

ProblemSpec make_logistic_from_data(Eigen::MatrixXd A, Vec y, double lambda,
                                    std::string id) {
  const int n = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (n < 1 || d < 1) throw ConfigurationError("logistic requires n, d >= 1");
  if (y.size() != n) throw ConfigurationError("logistic: label length mismatch");
  for (int i = 0; i < n; ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw ConfigurationError("logistic labels must be +1 or -1");
  if (lambda < 0.0) throw ConfigurationError("logistic requires lambda >= 0");

  auto Ap = std::make_shared<Eigen::MatrixXd>(std::move(A));
  auto yp = std::make_shared<Vec>(std::move(y));

  ProblemSpec spec;
  spec.id = std::move(id);
  spec.objective.dim = d;
  spec.objective.value_at = [Ap, yp, lambda, n](const Vec& x) {
    const Vec z = (*Ap) * x;
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += log1p_exp(-(*yp)[i] * z[i]);
    return total / n + 0.5 * lambda * x.squaredNorm();
  };
  spec.objective.gradient_at = [Ap, yp, lambda, n, d](const Vec& x) {
    const Vec z = (*Ap) * x;
    Vec coeff(n);
    for (int i = 0; i < n; ++i)
      coeff[i] = -(*yp)[i] * sigmoid(-(*yp)[i] * z[i]);
    Vec g = Ap->transpose() * coeff / n;
    if (lambda > 0.0) g += lambda * x;
    (void)d;
    return g;
  };

  const Eigen::MatrixXd AtA = Ap->transpose() * (*Ap);
  const double L = power_iteration_lambda_max(AtA) / (4.0 * n) + lambda;
  spec.objective.smoothness = L;

  // Reference solve for x*/f*: plain gradient descent at eta = 1/L until the
  // gradient norm drops below 1e-12 (at most 1e6 steps), cached here.
  Vec x = Vec::Zero(d);
  const double eta = 1.0 / L;
  for (int it = 0; it < 1000000; ++it) {
    const Vec g = spec.objective.gradient_at(x);
    if (g.norm() <= 1e-12) break;
    x -= eta * g;
  }
  spec.objective.x_star = x;
  spec.objective.f_star = spec.objective.value_at(x);

  spec.domain = Domain::full();
  spec.x0 = Vec::Zero(d);
  spec.smooth = true;
  spec.notes = "smooth; L = lambda_max(A^T A)/(4n) + lambda; x* by reference solve";
  return spec;
}

ProblemSpec make_logistic(int n, int d, double lambda, std::uint64_t seed) {
  if (n < 1 || d < 1) throw ConfigurationError("logistic requires n, d >= 1");
  std::mt19937_64 eng(seed);
  Eigen::MatrixXd A = random_matrix_scaled(n, d, eng);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec teacher(d);
  for (int j = 0; j < d; ++j) teacher[j] = normal(eng);
  const Vec margins = A * teacher;
  Vec y(n);
  for (int i = 0; i < n; ++i) y[i] = margins[i] >= 0.0 ? 1.0 : -1.0;
  return make_logistic_from_data(std::move(A), std::move(y), lambda,
                                 "logistic");
}

ProblemSpec make_abs_sum_from_center(Vec c, std::string id) {
  const int d = static_cast<int>(c.size());
  if (d < 1) throw ConfigurationError("abs_sum requires d >= 1");
  auto cp = std::make_shared<Vec>(std::move(c));

  ProblemSpec spec;
  spec.id = std::move(id);
  spec.objective.dim = d;
  spec.objective.value_at = [cp](const Vec& x) {
    return (x - *cp).cwiseAbs().sum();
  };
  // Subgradient: componentwise sign, zero exactly at kinks so the minimizer
  // is a clean stationary point.
  spec.objective.gradient_at = [cp, d](const Vec& x) {
    Vec g(d);
    for (int i = 0; i < d; ++i) {
      const double diff = x[i] - (*cp)[i];
      g[i] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    }
    return g;
  };
  spec.objective.x_star = *cp;
  spec.objective.f_star = 0.0;
  spec.objective.lipschitz = std::sqrt(static_cast<double>(d));
  spec.domain = Domain::make_ball(*cp, 10.0);
  spec.x0 = Vec::Zero(d);
  spec.smooth = false;
  spec.lipschitz = true;
  spec.notes = "nonsmooth Lipschitz, G = sqrt(d); kink subgradient = 0";
  return spec;
}

ProblemSpec make_max_affine_from_pieces(Eigen::MatrixXd A, Vec b,
                                        std::string id) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  if (m < 1 || d < 1) throw ConfigurationError("max_affine requires pieces");
  if (b.size() != m) throw ConfigurationError("max_affine: offset mismatch");
  if (d > 2)
    throw ConfigurationError(
        "max_affine grid oracle supports d <= 2; use the generator for "
        "higher dimensions");

  auto Apc = std::make_shared<Eigen::MatrixXd>(std::move(A));
  auto bpc = std::make_shared<Vec>(std::move(b));

  ProblemSpec spec;
  spec.id = std::move(id);
  spec.objective.dim = d;
  spec.objective.value_at = [Apc, bpc](const Vec& x) {
    return ((*Apc) * x + (*bpc)).maxCoeff();
  };
  spec.objective.gradient_at = [Apc, bpc, m](const Vec& x) {
    const Vec vals = (*Apc) * x + (*bpc);
    const double top = vals.maxCoeff();
    int first = -1;
    for (int i = 0; i < m; ++i) {
      if (vals[i] == top) {
        if (first < 0) first = i;
        // If two tied pieces have exactly opposite slopes the zero vector is
        // a subgradient; prefer it so minimizers terminate cleanly.
        for (int j = i + 1; j < m; ++j)
          if (vals[j] == top && Apc->row(j) == -Apc->row(i))
            return Vec(Vec::Zero(Apc->cols()));
      }
    }
    return Vec(Apc->row(first).transpose());
  };

  double G = 0.0;
  for (int i = 0; i < m; ++i) G = std::max(G, Apc->row(i).norm());
  spec.objective.lipschitz = G;

  auto value = spec.objective.value_at;
  const auto [x_star, f_star] = grid_minimize(value, d, 10.0, 5);
  spec.objective.x_star = x_star;
  spec.objective.f_star = f_star;

  spec.domain = Domain::make_ball(x_star, 10.0);
  spec.x0 = Vec::Zero(d);
  spec.smooth = false;
  spec.lipschitz = true;
  spec.notes = "nonsmooth Lipschitz, G = max piece slope norm; grid-search optimum";
  return spec;
}

ProblemSpec make_nonsmooth_lipschitz(NonsmoothKind kind, int d,
                                     std::uint64_t seed) {
  if (d < 1) throw ConfigurationError("nonsmooth problems require d >= 1");
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  if (kind == NonsmoothKind::abs_sum) {
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = normal(eng);
    return make_abs_sum_from_center(std::move(c), "abs_sum");
  }
  // max_affine: 2d pieces in +/- pairs so the function is coercive; dyadic
  // coefficients keep exact small-integer scalings representable.
  const int m = 2 * d;
  Eigen::MatrixXd A(m, d);
  Vec b(m);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double a = dyadic(normal(eng));
      A(2 * i, j) = a;
      A(2 * i + 1, j) = -a;
    }
    b[2 * i] = dyadic(normal(eng));
    b[2 * i + 1] = dyadic(normal(eng));
  }
  return make_max_affine_from_pieces(std::move(A), std::move(b), "max_affine");
}

std::vector<std::string> problem_ids() {
  return {"quadratic1d", "quadratic1d_ball", "ridge",
          "logistic",    "abs_sum",          "max_affine"};
}

ProblemSpec make_problem(const std::string& id, std::uint64_t seed_override) {
  const auto pick = [&](std::uint64_t def) {
    return seed_override != 0 ? seed_override : def;
  };
  if (id == "quadratic1d") return make_quadratic_1d(100.0);
  if (id == "quadratic1d_ball") {
    // The figure-friendly quadratic restricted to a ball so the diameter is
    // known; Lipschitz there with G = L * radius.
    ProblemSpec spec = make_quadratic_1d(100.0);
    spec.id = "quadratic1d_ball";
    spec.domain = Domain::make_ball(Vec::Zero(1), 2.0);
    spec.x0 = Vec::Constant(1, 1.5);
    spec.objective.lipschitz = 100.0 * 2.0;
    spec.lipschitz = true;
    spec.notes = "quadratic on a radius-2 ball; G = L * R = 200 there";
    return spec;
  }
  if (id == "ridge")
    return make_ridge_regression(kRidgeN, kRidgeD, kDefaultLambda,
                                 pick(kRidgeSeed));
  if (id == "logistic")
    return make_logistic(kLogisticN, kLogisticD, kDefaultLambda,
                         pick(kLogisticSeed));
  if (id == "abs_sum")
    return make_nonsmooth_lipschitz(NonsmoothKind::abs_sum, 2,
                                    pick(kAbsSumSeed));
  if (id == "max_affine")
    return make_nonsmooth_lipschitz(NonsmoothKind::max_affine, 2,
                                    pick(kMaxAffineSeed));
  if (id.rfind("csv-ridge:", 0) == 0) {
    auto [X, y] = load_csv_matrix(id.substr(10));
    return make_ridge_from_data(std::move(X), std::move(y), kDefaultLambda,
                                id);
  }
  if (id.rfind("csv-logistic:", 0) == 0) {
    auto [X, y] = load_csv_matrix(id.substr(13));
    return make_logistic_from_data(std::move(X), std::move(y), kDefaultLambda,
                                   id);
  }
  throw ConfigurationError("unknown problem id: " + id);
}

std::pair<Eigen::MatrixXd, Vec> load_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open CSV file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      // Strip a UTF-8 byte-order mark if present.
      if (line.size() >= 3 && line[0] == '\xef' && line[1] == '\xbb' &&
          line[2] == '\xbf')
        line.erase(0, 3);
      first = false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size())
          throw ConfigurationError("trailing junk in CSV cell: " + cell);
        row.push_back(v);
      } catch (const std::invalid_argument&) {
        throw ConfigurationError("non-numeric CSV cell: " + cell);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ConfigurationError("ragged CSV rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigurationError("empty CSV file: " + path);
  const int n = static_cast<int>(rows.size());
  const int cols = static_cast<int>(rows.front().size());
  if (cols < 2)
    throw ConfigurationError("CSV needs at least one feature column + label");
  Eigen::MatrixXd X(n, cols - 1);
  Vec y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < cols - 1; ++j) X(i, j) = rows[i][j];
    y[i] = rows[i][cols - 1];
  }
  return {std::move(X), std::move(y)};
}

ProblemSpec scale_problem(const ProblemSpec& base, double alpha) {
  if (!(alpha > 0.0)) throw ConfigurationError("scale factor must be positive");
  ProblemSpec spec = base;
  spec.id = base.id + "_x" + std::to_string(alpha);
  const auto value = base.objective.value_at;
  const auto grad = base.objective.gradient_at;
  spec.objective.value_at = [value, alpha](const Vec& x) {
    return alpha * value(x);
  };
  spec.objective.gradient_at = [grad, alpha](const Vec& x) {
    return Vec(alpha * grad(x));
  };
  if (base.objective.f_star) spec.objective.f_star = alpha * *base.objective.f_star;
  if (base.objective.smoothness)
    spec.objective.smoothness = alpha * *base.objective.smoothness;
  if (base.objective.lipschitz)
    spec.objective.lipschitz = alpha * *base.objective.lipschitz;
  return spec;
}

}  // namespace optbench
