#pragma once

#include "mmaprel/system_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace mmaprel {

// Event labels of the discrete-time marked process (includes the
// simultaneous return+failure labels that have zero probability in
// continuous time).
const std::vector<std::string>& discrete_labels();

struct MarkedProcessD {
  StateLayout layout;
  std::map<std::string, Matrix> blocks;
  Matrix transition;  // row-stochastic sum of all blocks
};

Matrix h_rf_d(const SystemModel& model, const Matrix& U);
Matrix h_nrf_d(const SystemModel& model, const Matrix& U, const Matrix& R, const Matrix& A);
Matrix h_o_d(const SystemModel& model, const Matrix& U, const Matrix& R, const Matrix& A);

// Assembles all 13 labeled blocks; throws std::runtime_error naming the
// first offending global state if the assembled rows do not sum to one
// within 1e-9.
MarkedProcessD build_blocks_d(const SystemModel& model);

// Euler step discretization of a continuous model: sub-stochastic blocks
// I + h T etc., exits scaled by h. Throws if h makes any entry negative.
SystemModel discretize(const SystemModel& model, double h);

// Largest step that keeps every diagonal nonnegative, with safety margin.
double max_discretization_step(const SystemModel& model, double margin = 0.9);

}  // namespace mmaprel
