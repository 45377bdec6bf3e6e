#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mmaprel/matkit.hpp"

#include <cmath>
#include <random>

using namespace mmaprel;

namespace {

Matrix random_matrix(int r, int c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

// Independent 12-term Taylor oracle for small ||q t||.
Matrix taylor_expm(const Matrix& q, double t, int terms = 12) {
  Matrix sum = Matrix::Identity(q.rows(), q.cols());
  Matrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * q * (t / k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("kron identity and scalar cases") {
  Matrix i2 = Matrix::Identity(2, 2), i3 = Matrix::Identity(3, 3);
  CHECK((kron(i2, i3) - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(7);
  Matrix m = random_matrix(3, 4, rng);
  Matrix two(1, 1);
  two << 2.0;
  CHECK((kron(two, m) - 2.0 * m).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("kron mixed-product identity on random inputs") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 20; ++it) {
    Matrix a = random_matrix(2, 2, rng), c = random_matrix(2, 2, rng);
    Matrix b = random_matrix(3, 3, rng), d = random_matrix(3, 3, rng);
    Matrix lhs = kron(a, b) * kron(c, d);
    Matrix rhs = kron({Matrix(a * c), Matrix(b * d)});
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("expm zero generator and closed-form 2x2") {
  Matrix z = Matrix::Zero(4, 4);
  CHECK((expm(z, 3.7) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  Matrix q(2, 2);
  q << -1, 1, 0, 0;
  Matrix e = expm(q, std::log(2.0));
  CHECK(e(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("expm agrees with Taylor oracle and is a semigroup") {
  std::mt19937_64 rng(3);
  Matrix q = random_matrix(6, 6, rng) * 0.3;
  CHECK((expm(q, 1.0) - taylor_expm(q, 1.0)).cwiseAbs().maxCoeff() < 1e-8);
  Matrix whole = expm(q, 1.0);
  Matrix halves = expm(q, 0.5) * expm(q, 0.5);
  CHECK((whole - halves).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("expm_integral trivial cases") {
  Matrix z = Matrix::Zero(3, 3);
  CHECK((expm_integral(z, 2.5) - 2.5 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  std::mt19937_64 rng(5);
  Matrix q = random_matrix(4, 4, rng);
  CHECK(expm_integral(q, 0.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("expm_integral derivative matches expm (finite differences)") {
  std::mt19937_64 rng(17);
  Matrix q = random_matrix(5, 5, rng) * 0.5;
  const double t = 1.0, h = 1e-4;
  Matrix deriv = (expm_integral(q, t + h) - expm_integral(q, t - h)) / (2 * h);
  CHECK((deriv - expm(q, t)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("solve_normalized hand cases") {
  Matrix a(2, 2);
  a << -1, 1, 1, -1;
  RowVector x = solve_normalized(a, Vector::Ones(2));
  CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(x(1) == doctest::Approx(0.5).epsilon(1e-12));

  Matrix b(2, 2);
  b << -2, 2, 1, -1;
  RowVector y = solve_normalized(b, Vector::Ones(2));
  CHECK(y(0) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(y(1) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("solve_normalized residual and normalization on random generators") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int it = 0; it < 10; ++it) {
    int n = 2 + int(it % 4);
    Matrix g = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (i != j) g(i, j) = u(rng);
      g(i, i) = -g.row(i).sum();
    }
    RowVector x = solve_normalized(g, Vector::Ones(n));
    CHECK((x * g).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(x.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.minCoeff() >= -1e-12);
  }
}

TEST_CASE("solve_normalized rejects a singular replaced system") {
  Matrix a = Matrix::Zero(3, 3);  // every column dropped state is unreachable
  CHECK_THROWS_AS(solve_normalized(a, Vector::Ones(3)), std::runtime_error);
}

TEST_CASE("matrix_power and geometric_sum") {
  Matrix d(2, 2);
  d << 0.5, 0.5, 0.25, 0.25;
  CHECK((matrix_power(d, 0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((matrix_power(d, 3) - Matrix(d * d * d)).cwiseAbs().maxCoeff() < 1e-14);

  Matrix expect = Matrix::Identity(2, 2);
  Matrix p = Matrix::Identity(2, 2);
  for (int k = 1; k <= 9; ++k) {
    p = p * d;
    expect += p;
  }
  CHECK((geometric_sum(d, 9) - expect).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((geometric_sum(d, 0) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}
