#pragma once

#include "mmaprel/system_model.hpp"

#include <map>
#include <string>
#include <vector>

namespace mmaprel {

// Event labels of the continuous-time marked process.
const std::vector<std::string>& continuous_labels();

struct MarkedProcess {
  StateLayout layout;
  std::map<std::string, Matrix> blocks;  // label -> full-dimension matrix
  Matrix generator;                      // sum of all blocks
};

// Event matrix functions. U selects/reshapes the internal factor; R and A
// are the post-event internal / damage factors, with a 1x1 identity
// standing in for the scalar collapse.
Matrix h_rf(const SystemModel& model, const Matrix& U);
Matrix h_nrf(const SystemModel& model, const Matrix& U, const Matrix& R, const Matrix& A);
Matrix h_o(const SystemModel& model, const Matrix& U, const Matrix& R, const Matrix& A);

// Assembles all 11 labeled blocks and the generator; throws
// std::runtime_error naming the first offending global state if the
// assembled rows do not sum to zero within 1e-9.
MarkedProcess build_blocks(const SystemModel& model);

// theta = (alpha (x) pi_L (x) omega (x) nu, 0).
RowVector initial_distribution(const SystemModel& model);

}  // namespace mmaprel
