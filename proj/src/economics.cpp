#include "mmaprel/economics.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mmaprel {

namespace {

using nlohmann::json;

Vector to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), Eigen::Index(v.size()));
}

double fixed_costs(const EventRates& psi, const EconomicParameters& econ) {
  return psi.nu * econ.unit_cost + psi.cr * econ.fixed_cr + psi.pm * econ.fixed_pm +
         psi.r * econ.return_cost;
}

}  // namespace

EconomicParameters load_econ(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& ex) {
    throw std::runtime_error(std::string("economics json parse: ") + ex.what());
  }
  EconomicParameters e;
  try {
    e.gross_benefit = j.at("gross_benefit").get<double>();
    e.downtime_cost = j.at("downtime_cost").get<double>();
    e.level_costs = j.at("level_costs").get<std::vector<double>>();
    e.damage_costs = j.at("damage_costs").get<std::vector<double>>();
    e.repair_phase_costs = j.at("repair_phase_costs").get<std::vector<double>>();
    e.pm_phase_costs = j.at("pm_phase_costs").get<std::vector<double>>();
    e.presence_cost = j.at("presence_cost").get<double>();
    e.vacation_cost = j.at("vacation_cost").get<double>();
    e.return_cost = j.at("return_cost").get<double>();
    e.fixed_cr = j.at("fixed_cr").get<double>();
    e.fixed_pm = j.at("fixed_pm").get<double>();
    e.unit_cost = j.at("unit_cost").get<double>();
  } catch (const std::exception& ex) {
    throw std::runtime_error(std::string("economics schema: ") + ex.what());
  }
  return e;
}

EconomicParameters load_econ_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_econ(buf.str());
}

Vector cost_vector(const SystemModel& mo, const EconomicParameters& econ) {
  if (Eigen::Index(econ.level_costs.size()) != mo.m() ||
      Eigen::Index(econ.damage_costs.size()) != mo.d() ||
      Eigen::Index(econ.repair_phase_costs.size()) != mo.m1() ||
      Eigen::Index(econ.pm_phase_costs.size()) != mo.m2())
    throw std::invalid_argument("cost_vector: dimension mismatch with model");

  const StateLayout lay = layout(mo);
  const Eigen::Index m = mo.m(), t = mo.t(), d = mo.d(), v = mo.v();
  const Vector c0 = to_vec(econ.level_costs);
  const Vector cd = to_vec(econ.damage_costs);
  const double B = econ.gross_benefit, C = econ.downtime_cost;
  const double H = econ.presence_cost, F = econ.vacation_cost;

  Vector c = Vector::Zero(lay.total);

  Vector e_tdv = Vector::Ones(t * d * v), e_td = Vector::Ones(t * d);
  c.segment(lay.offsets[0], lay.dims[0]) =
      (B - F) * Vector::Ones(lay.dims[0]) - kron(c0, e_tdv) -
      kron({Matrix(Vector::Ones(m * t)), Matrix(cd), Matrix(Vector::Ones(v))});

  c.segment(lay.offsets[1], lay.dims[1]) =
      (B - H) * Vector::Ones(lay.dims[1]) - kron(Matrix(c0.head(mo.m_sub())), Matrix(e_td)) -
      kron(Matrix(Vector::Ones(mo.m_sub() * t)), Matrix(cd));

  c.segment(lay.offsets[2], lay.dims[2]).setConstant(-(C + F));
  c.segment(lay.offsets[3], lay.dims[3]).setConstant(-(C + F));

  c.segment(lay.offsets[4], lay.dims[4]) =
      -(C + H) * Vector::Ones(lay.dims[4]) -
      kron(Matrix(Vector::Ones(t)), Matrix(to_vec(econ.repair_phase_costs)));
  c.segment(lay.offsets[5], lay.dims[5]) =
      -(C + H) * Vector::Ones(lay.dims[5]) -
      kron(Matrix(Vector::Ones(t)), Matrix(to_vec(econ.pm_phase_costs)));
  return c;
}

double profit_transient(const MarkedProcess& proc, const RowVector& theta,
                        const Vector& c, double t) {
  return theta * expm_integral(proc.generator, t) * c;
}

double profit_transient(const MarkedProcessD& proc, const RowVector& theta,
                        const Vector& c, long long periods) {
  if (periods == 0) return 0.0;
  return theta * geometric_sum(proc.transition, periods - 1) * c;
}

double total_profit(const MarkedProcess& proc, const RowVector& theta,
                    const Vector& c, const EconomicParameters& econ, double t) {
  EventRates psi = event_counts(proc, theta, t);
  return profit_transient(proc, theta, c, t) - econ.unit_cost - fixed_costs(psi, econ);
}

double total_profit(const MarkedProcessD& proc, const RowVector& theta,
                    const Vector& c, const EconomicParameters& econ, long long periods) {
  EventRates psi = event_counts(proc, theta, periods);
  return profit_transient(proc, theta, c, periods) - econ.unit_cost -
         fixed_costs(psi, econ);
}

double total_profit_rate(const MarkedProcess& proc, const MacroDistribution& pi,
                         const Vector& c, const EconomicParameters& econ) {
  return pi.global * c - fixed_costs(event_rates_stationary(proc, pi), econ);
}

double total_profit_rate(const MarkedProcessD& proc, const MacroDistribution& pi,
                         const Vector& c, const EconomicParameters& econ) {
  return pi.global * c - fixed_costs(event_rates_stationary(proc, pi), econ);
}

std::optional<double> break_even(const MarkedProcess& proc, const RowVector& theta,
                                 const Vector& c, const EconomicParameters& econ) {
  MacroDistribution pi = stationary(proc, false);
  if (total_profit_rate(proc, pi, c, econ) <= 0) return std::nullopt;

  // geometric bracketing from t = 1, then bisection to 1e-3 relative width
  double lo = 0.0, hi = 1.0;
  const double cap = 1e6;
  while (total_profit(proc, theta, c, econ, hi) < 0) {
    lo = hi;
    hi *= 2;
    if (hi > cap) return std::nullopt;
  }
  while (hi - lo > 1e-3 * hi) {
    double mid = 0.5 * (lo + hi);
    if (total_profit(proc, theta, c, econ, mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<long long> break_even(const MarkedProcessD& proc, const RowVector& theta,
                                    const Vector& c, const EconomicParameters& econ) {
  MacroDistribution pi = stationary(proc, false);
  if (total_profit_rate(proc, pi, c, econ) <= 0) return std::nullopt;

  long long lo = 0, hi = 1;
  const long long cap = 1LL << 40;
  while (total_profit(proc, theta, c, econ, hi) < 0) {
    lo = hi;
    hi *= 2;
    if (hi > cap) return std::nullopt;
  }
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    if (total_profit(proc, theta, c, econ, mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace mmaprel
