#pragma once

#include "mmaprel/mmap_continuous.hpp"
#include "mmaprel/mmap_discrete.hpp"

namespace mmaprel {

struct MacroDistribution {
  RowVector global;
  StateLayout layout;
  RowVector slice(int s) const {
    return global.segment(layout.offsets[s], layout.dims[s]);
  }
  double mass(int s) const { return slice(s).sum(); }
};

struct EventRates {
  double rf = 0, nrf = 0, cr = 0, pm = 0, r = 0, nu = 0, nvp = 0;
};

// Label groups aggregated by each Psi functional.
const std::map<std::string, std::vector<std::string>>& label_groups(bool discrete);

MacroDistribution transient(const MarkedProcess& proc, const RowVector& theta, double t);
MacroDistribution transient(const MarkedProcessD& proc, const RowVector& theta, long long periods);

// Stationary distribution by macro-block reduction; when cross_check is
// set the result is verified against a direct full solve within 1e-9.
MacroDistribution stationary(const MarkedProcess& proc, bool cross_check = true);
MacroDistribution stationary(const MarkedProcessD& proc, bool cross_check = true);

double availability(const MacroDistribution& dist);

// First-passage distribution out of the operational block.
ContinuousPH reliability_ph(const MarkedProcess& proc, const RowVector& theta);
DiscretePH reliability_ph(const MarkedProcessD& proc, const RowVector& theta);

// Mean number of events on [0, t] / over the first `periods` steps.
EventRates event_counts(const MarkedProcess& proc, const RowVector& theta, double t);
EventRates event_counts(const MarkedProcessD& proc, const RowVector& theta, long long periods);

// Events per unit time / per period in steady state.
EventRates event_rates_stationary(const MarkedProcess& proc, const MacroDistribution& pi);
EventRates event_rates_stationary(const MarkedProcessD& proc, const MacroDistribution& pi);

std::vector<double> geometric_grid(double start, double stop, int points);

}  // namespace mmaprel
