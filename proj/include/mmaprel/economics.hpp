#pragma once

#include "mmaprel/measures.hpp"

#include <optional>

namespace mmaprel {

struct EconomicParameters {
  double gross_benefit = 0;    // B, per unit time while operational
  double downtime_cost = 0;    // C, per unit time while not operational
  std::vector<double> level_costs;        // c0, one per internal phase
  std::vector<double> damage_costs;       // c_d, one per damage state
  std::vector<double> repair_phase_costs; // cr1
  std::vector<double> pm_phase_costs;     // cr2
  double presence_cost = 0;    // H, repairperson present
  double vacation_cost = 0;    // F, repairperson on vacation
  double return_cost = 0;      // G, per vacation completion
  double fixed_cr = 0;         // per corrective repair
  double fixed_pm = 0;         // per preventive maintenance
  double unit_cost = 0;        // per unit placed in service
};

EconomicParameters load_econ(const std::string& json_text);
EconomicParameters load_econ_file(const std::string& path);

// Per-phase net reward rate over the full state space. The repairperson
// presence cost applies in the macro-states where the repairperson is at
// the facility (O^nv, CR, PM) and the vacation cost elsewhere.
Vector cost_vector(const SystemModel& model, const EconomicParameters& econ);

// Phi(t): expected accumulated reward on [0, t] (periods in discrete mode).
double profit_transient(const MarkedProcess& proc, const RowVector& theta,
                        const Vector& c, double t);
double profit_transient(const MarkedProcessD& proc, const RowVector& theta,
                        const Vector& c, long long periods);

// Lambda(t): Phi(t) minus fixed event costs, including the initial unit.
double total_profit(const MarkedProcess& proc, const RowVector& theta,
                    const Vector& c, const EconomicParameters& econ, double t);
double total_profit(const MarkedProcessD& proc, const RowVector& theta,
                    const Vector& c, const EconomicParameters& econ, long long periods);

// Stationary net profit per unit time / per period.
double total_profit_rate(const MarkedProcess& proc, const MacroDistribution& pi,
                         const Vector& c, const EconomicParameters& econ);
double total_profit_rate(const MarkedProcessD& proc, const MacroDistribution& pi,
                         const Vector& c, const EconomicParameters& econ);

// First root of Lambda(t) = 0; empty when the stationary rate is <= 0.
std::optional<double> break_even(const MarkedProcess& proc, const RowVector& theta,
                                 const Vector& c, const EconomicParameters& econ);
std::optional<long long> break_even(const MarkedProcessD& proc, const RowVector& theta,
                                    const Vector& c, const EconomicParameters& econ);

}  // namespace mmaprel
