#include "mmaprel/measures.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mmaprel {

namespace {

// Extracts the (i,j) macro cell of a full matrix.
Matrix cell(const Matrix& full, const StateLayout& lay, int i, int j) {
  return full.block(lay.offsets[i], lay.offsets[j], lay.dims[i], lay.dims[j]);
}

// Shared block-reduction: eliminates macro-states 2..6 (which only feed
// each other forward or back into 1), yielding pi_1 and the expansion
// factors H_1j. `diag_shift` is 0 for a generator and -I for D - I.
MacroDistribution reduce_stationary(const Matrix& full, const StateLayout& lay,
                                    bool discrete) {
  const Eigen::Index n1 = lay.dims[0];
  Matrix balance = full;
  if (discrete) balance -= Matrix::Identity(full.rows(), full.cols());

  std::array<Matrix, 6> H;  // H[j] maps pi_1 -> pi_j (H[0] unused)
  for (int j = 1; j < 6; ++j) {
    Matrix numer = cell(balance, lay, 0, j);
    for (int i = 1; i < j; ++i) numer += H[i] * cell(balance, lay, i, j);
    Matrix diag = cell(balance, lay, j, j);
    H[j] = -(numer * diag.inverse());
  }

  Matrix reduced = cell(balance, lay, 0, 0);
  Vector mass = Vector::Ones(n1);
  for (int j = 1; j < 6; ++j) {
    reduced += H[j] * cell(balance, lay, j, 0);
    mass += H[j] * Vector::Ones(lay.dims[j]);
  }

  RowVector pi1 = solve_normalized(reduced, mass);
  MacroDistribution dist;
  dist.layout = lay;
  dist.global = RowVector::Zero(lay.total);
  dist.global.head(n1) = pi1;
  for (int j = 1; j < 6; ++j)
    dist.global.segment(lay.offsets[j], lay.dims[j]) = pi1 * H[j];
  return dist;
}

void cross_check_stationary(const Matrix& full, const MacroDistribution& dist,
                            bool discrete) {
  Matrix balance = full;
  if (discrete) balance -= Matrix::Identity(full.rows(), full.cols());
  RowVector direct = solve_normalized(balance, Vector::Ones(full.rows()));
  double diff = (direct - dist.global).cwiseAbs().maxCoeff();
  if (diff > 1e-9) {
    std::ostringstream os;
    os << "stationary: block reduction and full solve disagree by " << diff;
    throw std::runtime_error(os.str());
  }
}

double group_rate(const std::map<std::string, Matrix>& blocks,
                  const std::vector<std::string>& labels, const RowVector& weights) {
  double acc = 0;
  for (const auto& name : labels)
    acc += weights * blocks.at(name).rowwise().sum();
  return acc;
}

EventRates contract(const std::map<std::string, Matrix>& blocks, bool discrete,
                    const RowVector& weights) {
  const auto& groups = label_groups(discrete);
  EventRates r;
  r.rf = group_rate(blocks, groups.at("RF"), weights);
  r.nrf = group_rate(blocks, groups.at("NRF"), weights);
  r.cr = group_rate(blocks, groups.at("CR"), weights);
  r.pm = group_rate(blocks, groups.at("PM"), weights);
  r.r = group_rate(blocks, groups.at("R"), weights);
  r.nu = group_rate(blocks, groups.at("NU"), weights);
  r.nvp = group_rate(blocks, groups.at("NVP"), weights);
  return r;
}

}  // namespace

const std::map<std::string, std::vector<std::string>>& label_groups(bool discrete) {
  static const std::map<std::string, std::vector<std::string>> cont = {
      {"RF", {"RF", "RF+CR"}},
      {"NRF", {"NRF", "NRF+NU"}},
      {"CR", {"RF+CR", "R+CR"}},
      {"PM", {"PM", "R+PM"}},
      {"R", {"R", "R+CR", "R+PM", "R+NU", "R+NVP"}},
      {"NU", {"NRF+NU", "R+NU"}},
      {"NVP", {"R+NVP"}}};
  static const std::map<std::string, std::vector<std::string>> disc = {
      {"RF", {"RF", "RF+CR", "R+RF+CR"}},
      {"NRF", {"NRF", "NRF+NU", "R+NRF+NU"}},
      {"CR", {"RF+CR", "R+CR", "R+RF+CR"}},
      {"PM", {"PM", "R+PM"}},
      {"R", {"R", "R+CR", "R+PM", "R+NU", "R+NVP", "R+RF+CR", "R+NRF+NU"}},
      {"NU", {"NRF+NU", "R+NU", "R+NRF+NU"}},
      {"NVP", {"R+NVP"}}};
  return discrete ? disc : cont;
}

MacroDistribution transient(const MarkedProcess& proc, const RowVector& theta, double t) {
  if (theta.size() != proc.layout.total)
    throw std::invalid_argument("transient: theta length mismatch");
  MacroDistribution dist;
  dist.layout = proc.layout;
  dist.global = theta * expm(proc.generator, t);
  return dist;
}

MacroDistribution transient(const MarkedProcessD& proc, const RowVector& theta,
                            long long periods) {
  if (theta.size() != proc.layout.total)
    throw std::invalid_argument("transient: theta length mismatch");
  MacroDistribution dist;
  dist.layout = proc.layout;
  dist.global = theta * matrix_power(proc.transition, periods);
  return dist;
}

MacroDistribution stationary(const MarkedProcess& proc, bool cross_check) {
  MacroDistribution dist = reduce_stationary(proc.generator, proc.layout, false);
  if (cross_check) cross_check_stationary(proc.generator, dist, false);
  return dist;
}

MacroDistribution stationary(const MarkedProcessD& proc, bool cross_check) {
  MacroDistribution dist = reduce_stationary(proc.transition, proc.layout, true);
  if (cross_check) cross_check_stationary(proc.transition, dist, true);
  return dist;
}

double availability(const MacroDistribution& dist) {
  return dist.mass(kOpVacation) + dist.mass(kOpPresent);
}

ContinuousPH reliability_ph(const MarkedProcess& proc, const RowVector& theta) {
  const StateLayout& lay = proc.layout;
  const Eigen::Index n_op = lay.dims[0] + lay.dims[1];
  ContinuousPH ph;
  ph.init = theta.head(n_op);
  ph.sub = proc.generator.topLeftCorner(n_op, n_op);
  return ph;
}

DiscretePH reliability_ph(const MarkedProcessD& proc, const RowVector& theta) {
  const StateLayout& lay = proc.layout;
  const Eigen::Index n_op = lay.dims[0] + lay.dims[1];
  DiscretePH ph;
  ph.init = theta.head(n_op);
  ph.sub = proc.transition.topLeftCorner(n_op, n_op);
  return ph;
}

EventRates event_counts(const MarkedProcess& proc, const RowVector& theta, double t) {
  RowVector occupancy = theta * expm_integral(proc.generator, t);
  return contract(proc.blocks, false, occupancy);
}

EventRates event_counts(const MarkedProcessD& proc, const RowVector& theta,
                        long long periods) {
  if (periods == 0) return EventRates{};
  RowVector occupancy = theta * geometric_sum(proc.transition, periods - 1);
  return contract(proc.blocks, true, occupancy);
}

EventRates event_rates_stationary(const MarkedProcess& proc, const MacroDistribution& pi) {
  return contract(proc.blocks, false, pi.global);
}

EventRates event_rates_stationary(const MarkedProcessD& proc, const MacroDistribution& pi) {
  return contract(proc.blocks, true, pi.global);
}

std::vector<double> geometric_grid(double start, double stop, int points) {
  if (points < 2 || start <= 0 || stop <= start)
    throw std::invalid_argument("geometric_grid: bad parameters");
  std::vector<double> grid(points);
  double ratio = std::pow(stop / start, 1.0 / (points - 1));
  double x = start;
  for (int i = 0; i < points; ++i) {
    grid[i] = x;
    x *= ratio;
  }
  grid.back() = stop;
  return grid;
}

}  // namespace mmaprel
