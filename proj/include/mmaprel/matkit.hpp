#pragma once

#include <Eigen/Dense>

#include <initializer_list>

namespace mmaprel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

// Left-associated chain a1 (x) a2 (x) ... (x) ak.
Matrix kron(std::initializer_list<Matrix> factors);

// e^{q t} via scaling-and-squaring.
Matrix expm(const Matrix& q, double t = 1.0);

// int_0^t e^{q u} du, computed from the exponential of the augmented
// block matrix [[q, I], [0, 0]] (upper-right block). Valid for singular q.
Matrix expm_integral(const Matrix& q, double t);

// Solves x a = 0, x mass = 1 for a rank-(n-1) balance matrix by replacing
// the first column of a with mass. Throws std::runtime_error if the
// replaced matrix is singular (reducible model).
RowVector solve_normalized(const Matrix& a, const Vector& mass);

// d^n by binary powering (n >= 0).
Matrix matrix_power(const Matrix& d, long long n);

// sum_{k=0}^{n} d^k by halving recursion, O(log n) multiplies.
Matrix geometric_sum(const Matrix& d, long long n);

}  // namespace mmaprel
