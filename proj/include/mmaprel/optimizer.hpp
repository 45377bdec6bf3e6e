#pragma once

#include "mmaprel/economics.hpp"

namespace mmaprel {

// Order-3 Coxian vacation policy plus per-level stay probabilities.
struct PolicyParams {
  double V1 = 1, V2 = 0, V3 = 1, V4 = 0, V5 = 1;
  std::vector<double> p;  // K-1 entries
};

struct ParetoPoint {
  PolicyParams params;
  double profit_rate = 0;   // f1
  double availability = 0;  // f2
};

struct GAConfig {
  int population = 80;
  int generations = 120;
  unsigned long long seed = 1;
  double rate_log_min = -2.0;  // bounds for log10(V1), log10(V3), log10(V5)
  double rate_log_max = 3.0;
};

// Replaces the vacation distribution and stay probabilities of the
// template; throws std::invalid_argument on an invalid sub-generator.
SystemModel instantiate(const SystemModel& model_template, const PolicyParams& params);

ParetoPoint evaluate(const SystemModel& model_template, const EconomicParameters& econ,
                     const PolicyParams& params);

std::vector<ParetoPoint> pareto_front(const SystemModel& model_template,
                                      const EconomicParameters& econ,
                                      const GAConfig& config);

std::pair<double, double> ideal_point(const std::vector<ParetoPoint>& front);
ParetoPoint select_closest(const std::vector<ParetoPoint>& front);
ParetoPoint select_max_profit(const std::vector<ParetoPoint>& front);
ParetoPoint select_max_availability(const std::vector<ParetoPoint>& front);

}  // namespace mmaprel
