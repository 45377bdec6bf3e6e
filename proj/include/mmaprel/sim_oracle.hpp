#pragma once

#include "mmaprel/economics.hpp"

#include <array>
#include <cstdint>

namespace mmaprel {

struct SimConfig {
  double horizon = 1e5;  // time units; a discrete run covers horizon/step periods
  int replications = 20;
  std::uint64_t seed = 1;
  double warmup = 0;
};

struct SimEstimates {
  int replications = 0;
  // means and sample standard deviations across replications
  std::array<double, 6> occupancy{}, occupancy_sd{};
  double availability = 0, availability_sd = 0;
  EventRates rates{}, rates_sd{};
  double profit_rate = 0, profit_rate_sd = 0;
};

// Discrete-event simulation of the maintenance system driven directly by
// the raw model matrices (never by the assembled generator/transition
// matrix). Reproducible from (seed, replication) streams.
SimEstimates simulate(const SystemModel& model, const EconomicParameters& econ,
                      const SimConfig& config);

struct CompareLine {
  std::string name;
  double analytic = 0, simulated = 0, stderr_ = 0, z = 0;
  bool covered = false;
};

struct CompareReport {
  std::vector<CompareLine> lines;
  int covered = 0;
  bool pass = false;  // >= 95% of quantities covered at Bonferroni level
};

struct AnalyticSummary {
  std::array<double, 6> occupancy{};
  double availability = 0;
  EventRates rates{};
};

CompareReport compare(const AnalyticSummary& analytic, const SimEstimates& sim,
                      double alpha);

}  // namespace mmaprel
