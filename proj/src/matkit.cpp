#include "mmaprel/matkit.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace mmaprel {

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Matrix kron(std::initializer_list<Matrix> factors) {
  if (factors.size() == 0) throw std::invalid_argument("kron: empty chain");
  auto it = factors.begin();
  Matrix r = *it++;
  for (; it != factors.end(); ++it) r = kron(r, *it);
  return r;
}

Matrix expm(const Matrix& q, double t) {
  if (q.rows() != q.cols()) throw std::invalid_argument("expm: non-square input");
  if (t < 0) throw std::invalid_argument("expm: negative time");
  return (q * t).exp();
}

Matrix expm_integral(const Matrix& q, double t) {
  if (q.rows() != q.cols()) throw std::invalid_argument("expm_integral: non-square input");
  if (t < 0) throw std::invalid_argument("expm_integral: negative time");
  const Eigen::Index n = q.rows();
  Matrix aug = Matrix::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = q;
  aug.topRightCorner(n, n) = Matrix::Identity(n, n);
  return (aug * t).exp().topRightCorner(n, n);
}

RowVector solve_normalized(const Matrix& a, const Vector& mass) {
  if (a.rows() != a.cols()) throw std::invalid_argument("solve_normalized: non-square input");
  const Eigen::Index n = a.rows();
  if (mass.size() != n) throw std::invalid_argument("solve_normalized: mass length mismatch");
  Matrix m(n, n);
  m.col(0) = mass;
  if (n > 1) m.rightCols(n - 1) = a.rightCols(n - 1);
  Eigen::FullPivLU<Matrix> lu(m.transpose());
  if (!lu.isInvertible())
    throw std::runtime_error("solve_normalized: singular system (reducible model?)");
  Vector e1 = Vector::Zero(n);
  e1(0) = 1.0;
  return lu.solve(e1).transpose();
}

Matrix matrix_power(const Matrix& d, long long n) {
  if (d.rows() != d.cols()) throw std::invalid_argument("matrix_power: non-square input");
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  Matrix result = Matrix::Identity(d.rows(), d.cols());
  Matrix base = d;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

namespace {

// f(n) = sum_{k=0}^{n-1} d^k; returns (f(n), d^n).
std::pair<Matrix, Matrix> prefix(const Matrix& d, long long n) {
  const Eigen::Index sz = d.rows();
  if (n == 0) return {Matrix::Zero(sz, sz), Matrix::Identity(sz, sz)};
  if (n == 1) return {Matrix::Identity(sz, sz), d};
  auto [half, pow_half] = prefix(d, n / 2);
  Matrix f = half + pow_half * half;
  Matrix p = pow_half * pow_half;
  if (n & 1) {
    f += p;
    p = p * d;
  }
  return {f, p};
}

}  // namespace

Matrix geometric_sum(const Matrix& d, long long n) {
  if (d.rows() != d.cols()) throw std::invalid_argument("geometric_sum: non-square input");
  if (n < 0) throw std::invalid_argument("geometric_sum: negative bound");
  return prefix(d, n + 1).first;
}

}  // namespace mmaprel
