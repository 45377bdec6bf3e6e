#pragma once

// Shared helpers for the test binaries: bundled data access and randomized
// small-model generation satisfying every structural constraint.

#include "mmaprel/optimizer.hpp"
#include "mmaprel/system_model.hpp"

#include <random>
#include <string>

namespace mmaprel::testing {

inline std::string data_path(const std::string& name) {
  return std::string(MMAPREL_DATA_DIR) + "/" + name;
}

// The three reference vacation policies used across the test suite.
inline PolicyParams policy(int which) {
  switch (which) {
    case 1:
      return {10.1881, 10.1659, 10.1855, 9.8288, 8.3987, {0.9999, 0.5089}};
    case 2:
      return {10.2026, 10.1463, 10.1936, 9.8266, 8.4319, {0.9153, 0.5088}};
    default:
      return {959.2034, 2.1422, 634.2397, 178.3713, 390.6219, {0.0379, 0.3374}};
  }
}

inline RowVector random_simplex(Eigen::Index n, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  RowVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = g(rng) + 1e-3;
  return x / x.sum();
}

// Splits random stochastic rows into (matrix part, exit columns...).
// widths: in-matrix column count first, then one column per exit vector.
inline void random_stochastic_split(Eigen::Index rows, Eigen::Index cols,
                                    std::vector<Vector*> exits, Matrix& mat,
                                    std::mt19937_64& rng) {
  mat.resize(rows, cols);
  for (auto* e : exits) e->resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    RowVector row = random_simplex(cols + Eigen::Index(exits.size()), rng);
    mat.row(i) = row.head(cols);
    for (size_t k = 0; k < exits.size(); ++k) (*exits[k])(i) = row(cols + k);
  }
}

// Conservative rate rows: off-diagonal and exit rates positive, diagonal
// balances the row exactly.
inline void random_conservative_split(Eigen::Index n, std::vector<Vector*> exits,
                                      Matrix& mat, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> rate(0.1, 1.0);
  mat.setZero(n, n);
  for (auto* e : exits) e->resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double total = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) {
        mat(i, j) = rate(rng);
        total += mat(i, j);
      }
    for (auto* e : exits) {
      (*e)(i) = rate(rng);
      total += (*e)(i);
    }
    mat(i, i) = -total;
  }
}

// Random valid model with K = 2 and every factor order at most 2.
inline SystemModel random_model(TimeMode mode, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ord(1, 2);
  SystemModel mo;
  mo.time_mode = mode;
  mo.levels = {ord(rng), ord(rng)};
  const Eigen::Index m = mo.levels[0] + mo.levels[1];
  const Eigen::Index t = ord(rng), d = ord(rng), v = ord(rng);
  const Eigen::Index m1 = ord(rng), m2 = ord(rng);

  mo.alpha = random_simplex(m, rng);
  mo.gamma = random_simplex(t, rng);
  mo.omega = random_simplex(d, rng);
  mo.beta1 = random_simplex(m1, rng);
  mo.beta2 = random_simplex(m2, rng);
  mo.nu = random_simplex(v, rng);

  Vector c0;
  random_stochastic_split(d, d, {&c0}, mo.C, rng);
  random_stochastic_split(m, m, {&mo.W_r0, &mo.W_nr0}, mo.W, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  mo.omega0 = 0.3 * unit(rng);
  mo.p = {unit(rng)};

  if (mode == TimeMode::Continuous) {
    random_conservative_split(m, {&mo.T_r0, &mo.T_nr0}, mo.T, rng);
    Vector l0;
    random_conservative_split(t, {&l0}, mo.L, rng);
    Vector v0, s10, s20;
    random_conservative_split(v, {&v0}, mo.V, rng);
    random_conservative_split(m1, {&s10}, mo.S1, rng);
    random_conservative_split(m2, {&s20}, mo.S2, rng);
  } else {
    random_stochastic_split(m, m, {&mo.T_r0, &mo.T_nr0}, mo.T, rng);
    Vector l0;
    random_stochastic_split(t, t, {&l0}, mo.L, rng);
    Vector v0, s10, s20;
    random_stochastic_split(v, v, {&v0}, mo.V, rng);
    random_stochastic_split(m1, m1, {&s10}, mo.S1, rng);
    random_stochastic_split(m2, m2, {&s20}, mo.S2, rng);
  }
  return mo;
}

}  // namespace mmaprel::testing
