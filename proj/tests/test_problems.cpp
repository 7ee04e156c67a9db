#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "optbench/problems.hpp"

using namespace optbench;

TEST_CASE("quadratic: values, gradients, and declared constants") {
  const ProblemSpec spec = make_quadratic_1d(100.0);
  CHECK(spec.objective.dim == 1);
  CHECK(spec.objective.value_at(Vec::Constant(1, 3.0)) == 450.0);
  CHECK(spec.objective.gradient_at(Vec::Constant(1, 3.0))[0] == 300.0);
  CHECK(spec.objective.value_at(Vec::Zero(1)) == 0.0);
  CHECK((*spec.objective.x_star)[0] == 0.0);
  CHECK(*spec.objective.f_star == 0.0);
  CHECK(*spec.objective.smoothness == 100.0);
  CHECK_FALSE(spec.objective.lipschitz.has_value());
  CHECK(spec.smooth);
  CHECK_FALSE(spec.lipschitz);
  CHECK(spec.domain.kind == Domain::Kind::full_space);
  CHECK(spec.x0[0] == 1.0);
  CHECK_THROWS_AS(make_quadratic_1d(0.0), ConfigurationError);
  CHECK_THROWS_AS(make_quadratic_1d(-5.0), ConfigurationError);
}

TEST_CASE("ball-constrained quadratic declares the restricted Lipschitz constant") {
  const ProblemSpec spec = make_problem("quadratic1d_ball");
  CHECK(spec.domain.kind == Domain::Kind::ball);
  CHECK(spec.domain.radius == 2.0);
  CHECK(spec.domain.center[0] == 0.0);
  CHECK(spec.x0[0] == 1.5);
  CHECK(*spec.objective.lipschitz == 200.0);  // G = L * radius
  CHECK(*spec.objective.smoothness == 100.0);
  CHECK(spec.lipschitz);
  CHECK(spec.smooth);
}

TEST_CASE("ridge on a 1x1 system has the hand-solved optimum") {
  // f(x) = (1/2)(2x - 2)^2 + x^2, minimized at x = 2/3 with f = 2/3,
  // L = 4 + 2 = 6.
  Eigen::MatrixXd A(1, 1);
  A << 2.0;
  Vec b(1);
  b << 2.0;
  const ProblemSpec spec = make_ridge_from_data(A, b, 2.0);
  CHECK((*spec.objective.x_star)[0] ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(*spec.objective.f_star == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(*spec.objective.smoothness == 6.0);  // power iteration is exact here
  CHECK(spec.objective.gradient_at(*spec.objective.x_star).norm() < 1e-14);
  CHECK(spec.objective.value_at(Vec::Zero(1)) == 2.0);  // (1/2)*4
}

TEST_CASE("ridge smoothness constant matches a dense eigensolve") {
  std::mt19937_64 eng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(10, 4);
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = normal(eng);
  Vec b(10);
  for (int i = 0; i < 10; ++i) b[i] = normal(eng);
  const double lambda = 0.01;

  const ProblemSpec spec = make_ridge_from_data(A, b, lambda);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
  const double L_ref = es.eigenvalues().maxCoeff() / 10.0 + lambda;
  CHECK(*spec.objective.smoothness == doctest::Approx(L_ref).epsilon(1e-7));

  // The cached optimum satisfies the normal equations.
  CHECK(spec.objective.gradient_at(*spec.objective.x_star).norm() < 1e-10);
  // And f* is a lower bound on sampled values.
  for (int p = 0; p < 50; ++p) {
    Vec x(4);
    for (int j = 0; j < 4; ++j) x[j] = normal(eng);
    CHECK(spec.objective.value_at(x) >= *spec.objective.f_star);
  }
}

TEST_CASE("ridge generator is deterministic per seed") {
  const ProblemSpec a = make_problem("ridge");
  const ProblemSpec b = make_problem("ridge");
  CHECK(a.objective.dim == 12);
  Vec probe = Vec::LinSpaced(12, -1.0, 1.0);
  CHECK(a.objective.value_at(probe) == b.objective.value_at(probe));
  CHECK(a.objective.gradient_at(probe) == b.objective.gradient_at(probe));
  CHECK(*a.objective.smoothness == *b.objective.smoothness);
  CHECK(*a.objective.f_star == *b.objective.f_star);

  const ProblemSpec c = make_problem("ridge", 12345);
  CHECK(c.objective.value_at(probe) != a.objective.value_at(probe));
}

TEST_CASE("ridge rejects invalid shapes and parameters") {
  CHECK_THROWS_AS(make_ridge_regression(0, 3, 0.1, 1), ConfigurationError);
  CHECK_THROWS_AS(make_ridge_regression(3, 0, 0.1, 1), ConfigurationError);
  Eigen::MatrixXd A(2, 2);
  A.setZero();
  Vec b(3);
  b.setZero();
  CHECK_THROWS_AS(make_ridge_from_data(A, b, 0.1), ConfigurationError);
  CHECK_THROWS_AS(make_ridge_from_data(A, Vec::Zero(2), 0.0),
                  ConfigurationError);
  // A zero design matrix has no leading eigenvalue for power iteration.
  CHECK_THROWS_AS(make_ridge_from_data(A, Vec::Zero(2), 0.1), GenerationError);
}

TEST_CASE("logistic loss at the origin is log 2 and its gradient is analytic") {
  Eigen::MatrixXd A(3, 2);
  A << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0;
  Vec y(3);
  y << 1.0, -1.0, 1.0;
  const double lambda = 0.1;
  const ProblemSpec spec = make_logistic_from_data(A, y, lambda);

  CHECK(spec.objective.value_at(Vec::Zero(2)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // grad f(0) = -(1/2n) sum y_i a_i
  const Vec g0 = spec.objective.gradient_at(Vec::Zero(2));
  Vec expected = Vec::Zero(2);
  for (int i = 0; i < 3; ++i) expected -= y[i] * A.row(i).transpose();
  expected /= 2.0 * 3.0;
  CHECK(g0[0] == doctest::Approx(expected[0]).epsilon(1e-14));
  CHECK(g0[1] == doctest::Approx(expected[1]).epsilon(1e-14));

  // Reference solve: near-zero gradient at the cached optimum, f* consistent.
  CHECK(spec.objective.gradient_at(*spec.objective.x_star).norm() <= 1e-11);
  CHECK(spec.objective.value_at(*spec.objective.x_star) ==
        *spec.objective.f_star);

  // L = lambda_max(A^T A)/(4n) + lambda
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
  const double L_ref = es.eigenvalues().maxCoeff() / 12.0 + lambda;
  CHECK(*spec.objective.smoothness == doctest::Approx(L_ref).epsilon(1e-7));
}

TEST_CASE("logistic labels must be +/-1") {
  Eigen::MatrixXd A(2, 1);
  A << 1.0, -1.0;
  Vec y(2);
  y << 1.0, 0.5;
  CHECK_THROWS_AS(make_logistic_from_data(A, y, 0.1), ConfigurationError);
}

TEST_CASE("registry logistic instance is reproducible") {
  const ProblemSpec a = make_problem("logistic");
  const ProblemSpec b = make_problem("logistic");
  CHECK(a.objective.dim == 8);
  const Vec probe = Vec::LinSpaced(8, -0.5, 0.5);
  CHECK(a.objective.value_at(probe) == b.objective.value_at(probe));
  CHECK(*a.objective.f_star == *b.objective.f_star);
  CHECK(a.objective.gradient_at(*a.objective.x_star).norm() <= 1e-11);
}

TEST_CASE("abs_sum: values, kink subgradients, constants") {
  Vec c(2);
  c << 1.0, -2.0;
  const ProblemSpec spec = make_abs_sum_from_center(c);
  CHECK(spec.objective.value_at(c) == 0.0);
  Vec x(2);
  x << 2.0, 0.0;
  CHECK(spec.objective.value_at(x) == 3.0);

  Vec probe(2);
  probe << 2.0, -3.0;
  const Vec g = spec.objective.gradient_at(probe);
  CHECK(g[0] == 1.0);
  CHECK(g[1] == -1.0);

  // At a kink the zero subgradient is chosen.
  Vec kink(2);
  kink << 1.0, 0.0;
  const Vec gk = spec.objective.gradient_at(kink);
  CHECK(gk[0] == 0.0);
  CHECK(gk[1] == 1.0);
  CHECK(spec.objective.gradient_at(c).norm() == 0.0);

  CHECK(*spec.objective.lipschitz == std::sqrt(2.0));
  CHECK(*spec.objective.f_star == 0.0);
  CHECK((*spec.objective.x_star) == c);
  CHECK(spec.domain.kind == Domain::Kind::ball);
  CHECK(spec.domain.radius == 10.0);
  CHECK(spec.domain.center == c);
  CHECK_FALSE(spec.smooth);
  CHECK(spec.lipschitz);
}

TEST_CASE("max_affine reduces to |x| for opposite unit slopes") {
  Eigen::MatrixXd A(2, 1);
  A << 1.0, -1.0;
  Vec b(2);
  b << 0.0, 0.0;
  const ProblemSpec spec = make_max_affine_from_pieces(A, b);
  CHECK(spec.objective.value_at(Vec::Constant(1, 3.0)) == 3.0);
  CHECK(spec.objective.value_at(Vec::Constant(1, -2.0)) == 2.0);
  CHECK(spec.objective.gradient_at(Vec::Constant(1, 3.0))[0] == 1.0);
  CHECK(spec.objective.gradient_at(Vec::Constant(1, -2.0))[0] == -1.0);
  // Exactly opposite slopes tie at zero: the zero subgradient is returned.
  CHECK(spec.objective.gradient_at(Vec::Zero(1))[0] == 0.0);
  CHECK(*spec.objective.lipschitz == 1.0);
  CHECK(std::abs((*spec.objective.x_star)[0]) < 5e-7);
  CHECK(std::abs(*spec.objective.f_star) < 5e-7);
}

TEST_CASE("max_affine grid oracle finds an interior crossing") {
  // max(2x - 1, -x) is minimized where the pieces cross: x = 1/3, f = -1/3.
  Eigen::MatrixXd A(2, 1);
  A << 2.0, -1.0;
  Vec b(2);
  b << -1.0, 0.0;
  const ProblemSpec spec = make_max_affine_from_pieces(A, b);
  CHECK((*spec.objective.x_star)[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
  CHECK(*spec.objective.f_star == doctest::Approx(-1.0 / 3.0).epsilon(1e-5));
  CHECK(*spec.objective.lipschitz == 2.0);
  // The optimum is never beaten by sampled points.
  for (int i = 0; i <= 100; ++i) {
    const double x = -5.0 + 0.1 * i;
    CHECK(spec.objective.value_at(Vec::Constant(1, x)) >=
          *spec.objective.f_star - 1e-12);
  }
}

TEST_CASE("max_affine rejects dimensions above the grid oracle's reach") {
  Eigen::MatrixXd A(2, 3);
  A.setOnes();
  CHECK_THROWS_AS(make_max_affine_from_pieces(A, Vec::Zero(2)),
                  ConfigurationError);
}

TEST_CASE("registry max_affine uses dyadic slopes") {
  const ProblemSpec spec = make_problem("max_affine");
  CHECK(spec.objective.dim == 2);
  // Any returned subgradient is a piece slope; all slope entries sit on the
  // 2^-20 grid so that small integer scalings stay exact.
  Vec probe(2);
  probe << 3.7, -1.2;
  const Vec g = spec.objective.gradient_at(probe);
  for (int i = 0; i < 2; ++i) {
    const double scaled = g[i] * 1048576.0;
    CHECK(scaled == std::round(scaled));
  }
  CHECK(spec.domain.kind == Domain::Kind::ball);
  CHECK(spec.domain.radius == 10.0);
  CHECK(spec.domain.center == *spec.objective.x_star);
}

TEST_CASE("registry abs_sum instance") {
  const ProblemSpec spec = make_problem("abs_sum");
  CHECK(spec.objective.dim == 2);
  CHECK(*spec.objective.lipschitz == std::sqrt(2.0));
  CHECK(spec.objective.value_at(*spec.objective.x_star) == 0.0);
  CHECK(spec.x0 == Vec::Zero(2));
}

TEST_CASE("problem registry lists every built-in id") {
  const auto ids = problem_ids();
  CHECK(ids.size() == 6);
  for (const std::string& id : ids) {
    const ProblemSpec spec = make_problem(id);
    CHECK(spec.id == id);
    CHECK(spec.objective.dim >= 1);
    CHECK(spec.x0.size() == spec.objective.dim);
  }
  CHECK_THROWS_AS(make_problem("nope"), ConfigurationError);
}

TEST_CASE("csv-backed problems") {
  const std::string path = "test_problems_data.csv";
  {
    std::ofstream out(path);
    out << "1,2\n";
    out << "2,4.5\n";
    out << "3,5\n";
  }
  const auto [X, y] = load_csv_matrix(path);
  CHECK(X.rows() == 3);
  CHECK(X.cols() == 1);
  CHECK(X(1, 0) == 2.0);
  CHECK(y[1] == 4.5);

  const ProblemSpec ridge = make_problem("csv-ridge:" + path);
  CHECK(ridge.objective.dim == 1);
  CHECK(ridge.objective.x_star.has_value());

  {
    std::ofstream out(path);
    out << "1,1\n";
    out << "-2,-1\n";
  }
  const ProblemSpec logistic = make_problem("csv-logistic:" + path);
  CHECK(logistic.objective.dim == 1);
  CHECK(logistic.objective.value_at(Vec::Zero(1)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));

  std::remove(path.c_str());
}

TEST_CASE("csv loader rejects malformed input") {
  const std::string path = "test_problems_bad.csv";
  {
    std::ofstream out(path);
    out << "a,b\n1,2\n";
  }
  CHECK_THROWS_AS(load_csv_matrix(path), ConfigurationError);
  {
    std::ofstream out(path);
    out << "1,2\n1\n";
  }
  CHECK_THROWS_AS(load_csv_matrix(path), ConfigurationError);
  {
    std::ofstream out(path);
  }
  CHECK_THROWS_AS(load_csv_matrix(path), ConfigurationError);
  {
    std::ofstream out(path);
    out << "5\n6\n";  // single column: no features
  }
  CHECK_THROWS_AS(load_csv_matrix(path), ConfigurationError);
  CHECK_THROWS_AS(load_csv_matrix("does_not_exist.csv"), ConfigurationError);
  std::remove(path.c_str());
}

TEST_CASE("csv loader handles CRLF line endings") {
  const std::string path = "test_problems_crlf.csv";
  {
    std::ofstream out(path);
    out << "1,2\r\n3,4\r\n";
  }
  const auto [X, y] = load_csv_matrix(path);
  CHECK(X.rows() == 2);
  CHECK(X(1, 0) == 3.0);
  CHECK(y[1] == 4.0);
  std::remove(path.c_str());
}

TEST_CASE("scale_problem multiplies the objective and its constants") {
  const ProblemSpec base = make_quadratic_1d(100.0);
  const ProblemSpec scaled = scale_problem(base, 100.0);
  const Vec probe = Vec::Constant(1, 0.5);
  CHECK(scaled.objective.value_at(probe) ==
        100.0 * base.objective.value_at(probe));
  CHECK(scaled.objective.gradient_at(probe)[0] ==
        100.0 * base.objective.gradient_at(probe)[0]);
  CHECK(*scaled.objective.smoothness == 10000.0);
  CHECK(*scaled.objective.f_star == 0.0);
  CHECK((*scaled.objective.x_star)[0] == (*base.objective.x_star)[0]);
  CHECK_THROWS_AS(scale_problem(base, 0.0), ConfigurationError);
  CHECK_THROWS_AS(scale_problem(base, -2.0), ConfigurationError);

  const ProblemSpec abs2 = scale_problem(make_problem("abs_sum"), 100.0);
  CHECK(*abs2.objective.lipschitz == 100.0 * std::sqrt(2.0));
}
