#pragma once

#include "mmaprel/phase_type.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmaprel {

enum class TimeMode { Continuous, Discrete };

struct ModelError : std::runtime_error {
  explicit ModelError(std::vector<std::string> issues_);
  std::vector<std::string> issues;
};

// Macro-state indices into StateLayout (order fixed throughout).
enum Macro { kOpVacation = 0, kOpPresent = 1, kRF = 2, kNRF = 3, kCR = 4, kPM = 5 };

struct StateLayout {
  std::array<Eigen::Index, 6> dims{};
  std::array<Eigen::Index, 6> offsets{};
  Eigen::Index total = 0;
};

struct SystemModel {
  TimeMode time_mode = TimeMode::Continuous;

  std::vector<int> levels;          // n_1 ... n_K
  RowVector alpha;                  // 1 x m
  Matrix T;                         // m x m internal wear
  Vector T_r0, T_nr0;               // repairable / non-repairable exits
  RowVector gamma;                  // 1 x t
  Matrix L;                         // t x t shock clock
  Matrix W;                         // m x m internal modification after shock
  Vector W_r0, W_nr0;
  double omega0 = 0.0;              // shock kill probability
  Matrix C;                         // d x d cumulative damage
  RowVector omega;                  // 1 x d
  RowVector beta1;                  // corrective repair
  Matrix S1;
  RowVector beta2;                  // preventive maintenance
  Matrix S2;
  RowVector nu;                     // vacation
  Matrix V;
  std::vector<double> p;            // p_1 ... p_{K-1}
  double step = 1.0;                // period length in time units (discrete mode)

  int K() const { return int(levels.size()); }
  Eigen::Index m() const { return T.rows(); }
  Eigen::Index n_K() const { return levels.back(); }
  Eigen::Index m_sub() const { return m() - n_K(); }
  Eigen::Index t() const { return L.rows(); }
  Eigen::Index d() const { return C.rows(); }
  Eigen::Index v() const { return V.rows(); }
  Eigen::Index m1() const { return S1.rows(); }
  Eigen::Index m2() const { return S2.rows(); }

  // Exit vectors under the active time-mode convention.
  Vector L0() const;
  Vector C0() const;
  Vector V0() const;
  Vector S1_0() const;
  Vector S2_0() const;

  ContinuousPH shock_clock_cont() const { return {gamma, L}; }
  DiscretePH shock_clock_disc() const { return {gamma, L}; }
};

// Diagonal 0/1 selector for level k (1-based).
Matrix level_selector(const SystemModel& model, int k);

// (U_{1..K-1}, U'_{1..K-1}) of shapes (m - n_K) x m and m x (m - n_K).
std::pair<Matrix, Matrix> noncritical_selectors(const SystemModel& model);

StateLayout layout(const SystemModel& model);

ValidationReport validate(const SystemModel& model);

// Parses + validates; throws ModelError with the full issue list on failure.
SystemModel load_model(const std::string& json_text);
SystemModel load_model_file(const std::string& path);

}  // namespace mmaprel
