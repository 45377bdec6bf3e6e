#include "mmaprel/mmap_discrete.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mmaprel {

const std::vector<std::string>& discrete_labels() {
  static const std::vector<std::string> labels = {
      "O",      "RF",   "NRF",  "R",       "PM",        "RF+CR", "NRF+NU",
      "R+CR",   "R+NU", "R+PM", "R+RF+CR", "R+NRF+NU",  "R+NVP"};
  return labels;
}

namespace {

Matrix ones(Eigen::Index r, Eigen::Index c = 1) { return Matrix::Ones(r, c); }
Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

Matrix h_rf_d(const SystemModel& mo, const Matrix& U) {
  Matrix Lg = mo.L0() * mo.gamma;
  return kron({Matrix(U * mo.T_r0), mo.L, ones(mo.d())}) +
         kron({Matrix(U * (mo.T_r0 + mo.T * mo.W_r0)), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C * ones(mo.d()))});
}

Matrix h_nrf_d(const SystemModel& mo, const Matrix& U, const Matrix& R, const Matrix& A) {
  Matrix Lg = mo.L0() * mo.gamma;
  Matrix eA = ones(mo.d()) * A;
  return kron({Matrix(U * mo.T_nr0 * R), mo.L, eA}) +
         kron({Matrix(U * (mo.T_nr0 + mo.T * mo.W_nr0) * R),
               Matrix(Lg * (1 - mo.omega0)), Matrix(mo.C * eA)}) +
         kron({Matrix(U * ones(mo.m()) * R), Matrix(Lg * mo.omega0), eA}) +
         kron({Matrix(U * ones(mo.m()) * R), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C0() * A)});
}

Matrix h_o_d(const SystemModel& mo, const Matrix& U, const Matrix& R, const Matrix& A) {
  Matrix Lg = mo.L0() * mo.gamma;
  return kron({Matrix(U * mo.T * R), mo.L, A}) +
         kron({Matrix(U * mo.T * mo.W * R), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C * A)});
}

MarkedProcessD build_blocks_d(const SystemModel& mo) {
  if (mo.time_mode != TimeMode::Discrete)
    throw std::invalid_argument("build_blocks_d: discrete model required");
  MarkedProcessD proc;
  proc.layout = layout(mo);
  const StateLayout& lay = proc.layout;
  const Eigen::Index N = lay.total;
  for (const auto& label : discrete_labels())
    proc.blocks.emplace(label, Matrix::Zero(N, N));

  auto put = [&](const std::string& label, int i, int j, const Matrix& cell) {
    proc.blocks.at(label).block(lay.offsets[i - 1], lay.offsets[j - 1],
                                lay.dims[i - 1], lay.dims[j - 1]) += cell;
  };

  const Eigen::Index m = mo.m(), t = mo.t(), d = mo.d();
  const Matrix Im = eye(m), Id = eye(d);
  const Matrix one = eye(1);
  const Matrix Lg = mo.L0() * mo.gamma;
  const Matrix Lfull = mo.L + Lg;  // shock clock keeps running while down
  auto [Usub, UsubT] = noncritical_selectors(mo);
  const Matrix UK = level_selector(mo, mo.K());
  const Vector V0 = mo.V0();

  put("O", 1, 1, kron(h_o_d(mo, Im, Im, Id), mo.V));
  put("O", 2, 2, h_o_d(mo, Usub, UsubT, Id));
  put("O", 3, 3, kron(Lfull, mo.V));
  put("O", 4, 4, kron(Lfull, mo.V));
  put("O", 5, 5, kron(Lfull, mo.S1));
  put("O", 6, 6, kron(Lfull, mo.S2));
  put("O", 5, 1, kron({Matrix(mo.alpha), Lfull, Matrix(mo.omega), Matrix(mo.S1_0()), Matrix(mo.nu)}));
  put("O", 6, 1, kron({Matrix(mo.alpha), Lfull, Matrix(mo.omega), Matrix(mo.S2_0()), Matrix(mo.nu)}));

  put("RF", 1, 3, kron(h_rf_d(mo, Im), mo.V));
  put("NRF", 1, 4, kron(h_nrf_d(mo, Im, one, one), mo.V));
  {
    // return without a new vacation: the observed level is the one reached
    // at the end of the period, so the stay probability 1 - p_k attaches to
    // the destination level
    Matrix cell = Matrix::Zero(lay.dims[0], lay.dims[1]);
    for (int k = 1; k < mo.K(); ++k)
      cell += kron(h_o_d(mo, Im, Matrix(level_selector(mo, k) * UsubT), Id),
                   Matrix(V0 * (1 - mo.p[k - 1])));
    put("R", 1, 2, cell);
  }
  put("PM", 2, 6, kron(h_o_d(mo, Usub, Matrix(UK * ones(m)), ones(d)), Matrix(mo.beta2)));
  put("RF+CR", 2, 5, kron(h_rf_d(mo, Usub), Matrix(mo.beta1)));
  put("NRF+NU", 2, 1, kron(h_nrf_d(mo, Usub, Matrix(mo.alpha), Matrix(mo.omega)), Matrix(mo.nu)));
  put("R+CR", 3, 5, kron({Lfull, Matrix(V0), Matrix(mo.beta1)}));
  put("R+NU", 4, 1, kron({Matrix(mo.alpha), Lfull, Matrix(mo.omega), Matrix(V0 * mo.nu)}));
  put("R+PM", 1, 6, kron({h_o_d(mo, Im, Matrix(UK * ones(m)), ones(d)), Matrix(V0), Matrix(mo.beta2)}));
  put("R+RF+CR", 1, 5, kron({h_rf_d(mo, Im), Matrix(V0), Matrix(mo.beta1)}));
  put("R+NRF+NU", 1, 1, kron(h_nrf_d(mo, Im, Matrix(mo.alpha), Matrix(mo.omega)), Matrix(V0 * mo.nu)));
  {
    Matrix cell = Matrix::Zero(lay.dims[0], lay.dims[0]);
    for (int k = 1; k < mo.K(); ++k)
      cell += kron(h_o_d(mo, Im, level_selector(mo, k), Id),
                   Matrix(mo.p[k - 1] * V0 * mo.nu));
    put("R+NVP", 1, 1, cell);
  }

  proc.transition = Matrix::Zero(N, N);
  for (auto& [label, block] : proc.blocks) proc.transition += block;

  Vector rs = proc.transition.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::abs(rs(i) - 1.0) > 1e-9) {
      std::ostringstream os;
      os << "build_blocks_d: stochasticity failure at global state " << i
         << " (row sum " << rs(i) << ")";
      throw std::runtime_error(os.str());
    }
  return proc;
}

double max_discretization_step(const SystemModel& mo, double margin) {
  double max_rate = 0.0;
  auto scan = [&](const Matrix& q) {
    for (Eigen::Index i = 0; i < q.rows(); ++i)
      max_rate = std::max(max_rate, -q(i, i));
  };
  scan(mo.T);
  scan(mo.L);
  scan(mo.V);
  scan(mo.S1);
  scan(mo.S2);
  return margin / max_rate;
}

SystemModel discretize(const SystemModel& mo, double h) {
  if (mo.time_mode != TimeMode::Discrete && mo.time_mode != TimeMode::Continuous)
    throw std::invalid_argument("discretize: bad model");
  if (mo.time_mode == TimeMode::Discrete)
    throw std::invalid_argument("discretize: model is already discrete");
  if (h <= 0) throw std::invalid_argument("discretize: step must be positive");

  SystemModel out = mo;
  out.time_mode = TimeMode::Discrete;
  out.step = h;
  auto step = [&](const Matrix& q) -> Matrix {
    return Matrix::Identity(q.rows(), q.cols()) + h * q;
  };
  out.T = step(mo.T);
  out.T_r0 = h * mo.T_r0;
  out.T_nr0 = h * mo.T_nr0;
  out.L = step(mo.L);
  out.V = step(mo.V);
  out.S1 = step(mo.S1);
  out.S2 = step(mo.S2);

  auto check = [&](const char* name, const Matrix& q) {
    if (q.minCoeff() < 0) {
      std::ostringstream os;
      os << "discretize: step " << h << " makes " << name << " negative";
      throw std::invalid_argument(os.str());
    }
  };
  check("T", out.T);
  check("L", out.L);
  check("V", out.V);
  check("S1", out.S1);
  check("S2", out.S2);
  return out;
}

}  // namespace mmaprel
