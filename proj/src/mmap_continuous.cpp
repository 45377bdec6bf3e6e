#include "mmaprel/mmap_continuous.hpp"

#include <sstream>
#include <stdexcept>

namespace mmaprel {

const std::vector<std::string>& continuous_labels() {
  static const std::vector<std::string> labels = {
      "O",    "RF",     "NRF",  "R",    "PM",    "RF+CR",
      "NRF+NU", "R+CR", "R+NU", "R+PM", "R+NVP"};
  return labels;
}

namespace {

Matrix ones(Eigen::Index r, Eigen::Index c = 1) { return Matrix::Ones(r, c); }
Matrix eye(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

Matrix h_rf(const SystemModel& mo, const Matrix& U) {
  Matrix Lg = mo.L0() * mo.gamma;
  return kron({Matrix(U * mo.T_r0), eye(mo.t()), ones(mo.d())}) +
         kron({Matrix(U * mo.W_r0), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C * ones(mo.d()))});
}

Matrix h_nrf(const SystemModel& mo, const Matrix& U, const Matrix& R, const Matrix& A) {
  Matrix Lg = mo.L0() * mo.gamma;
  Matrix eA = ones(mo.d()) * A;
  return kron({Matrix(U * mo.T_nr0 * R), eye(mo.t()), eA}) +
         kron({Matrix(U * mo.W_nr0 * R), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C * eA)}) +
         kron({Matrix(U * ones(mo.m()) * R), Matrix(Lg * mo.omega0), eA}) +
         kron({Matrix(U * ones(mo.m()) * R), Matrix(Lg * (1 - mo.omega0)),
               Matrix(mo.C0() * A)});
}

Matrix h_o(const SystemModel& mo, const Matrix& U, const Matrix& R, const Matrix& A) {
  Matrix Lg = mo.L0() * mo.gamma;
  return kron({Matrix(U * mo.T * R), eye(mo.t()), A}) +
         kron({Matrix(U * R), mo.L, A}) +
         kron({Matrix(U * mo.W * R), Matrix(Lg * (1 - mo.omega0)), Matrix(mo.C * A)});
}

MarkedProcess build_blocks(const SystemModel& mo) {
  if (mo.time_mode != TimeMode::Continuous)
    throw std::invalid_argument("build_blocks: continuous model required");
  MarkedProcess proc;
  proc.layout = layout(mo);
  const StateLayout& lay = proc.layout;
  const Eigen::Index N = lay.total;
  for (const auto& label : continuous_labels())
    proc.blocks.emplace(label, Matrix::Zero(N, N));

  auto put = [&](const std::string& label, int i, int j, const Matrix& cell) {
    proc.blocks.at(label).block(lay.offsets[i - 1], lay.offsets[j - 1],
                                lay.dims[i - 1], lay.dims[j - 1]) += cell;
  };

  const Eigen::Index m = mo.m(), t = mo.t(), d = mo.d(), v = mo.v();
  const Matrix Im = eye(m), It = eye(t), Id = eye(d), Iv = eye(v);
  const Matrix one = eye(1);
  const Matrix Lg = mo.L0() * mo.gamma;
  auto [Usub, UsubT] = noncritical_selectors(mo);
  const Matrix UK = level_selector(mo, mo.K());
  const Vector V0 = mo.V0();

  // unmarked internal evolution
  put("O", 1, 1, kron(h_o(mo, Im, Im, Id), Iv) + kron({Im, It, Id, mo.V}));
  put("O", 2, 2, h_o(mo, Usub, UsubT, Id));
  put("O", 3, 3, kron(It, mo.V) + kron(Matrix(mo.L + Lg), Iv));
  put("O", 4, 4, kron(It, mo.V) + kron(Matrix(mo.L + Lg), Iv));
  put("O", 5, 5, kron(It, mo.S1) + kron(Matrix(mo.L + Lg), eye(mo.m1())));
  put("O", 6, 6, kron(It, mo.S2) + kron(Matrix(mo.L + Lg), eye(mo.m2())));
  put("O", 5, 1, kron({Matrix(mo.alpha), It, Matrix(mo.omega), Matrix(mo.S1_0()), Matrix(mo.nu)}));
  put("O", 6, 1, kron({Matrix(mo.alpha), It, Matrix(mo.omega), Matrix(mo.S2_0()), Matrix(mo.nu)}));

  // marked events
  put("RF", 1, 3, kron(h_rf(mo, Im), Iv));
  put("NRF", 1, 4, kron(h_nrf(mo, Im, one, one), Iv));
  {
    Matrix cell = Matrix::Zero(lay.dims[0], lay.dims[1]);
    for (int k = 1; k < mo.K(); ++k)
      cell += kron({Matrix(level_selector(mo, k) * UsubT), It, Id,
                    Matrix(V0 * (1 - mo.p[k - 1]))});
    put("R", 1, 2, cell);
  }
  put("PM", 2, 6, kron(h_o(mo, Usub, Matrix(UK * ones(m)), ones(d)), Matrix(mo.beta2)));
  put("RF+CR", 2, 5, kron(h_rf(mo, Usub), Matrix(mo.beta1)));
  put("NRF+NU", 2, 1, kron(h_nrf(mo, Usub, Matrix(mo.alpha), Matrix(mo.omega)), Matrix(mo.nu)));
  put("R+CR", 3, 5, kron({It, Matrix(V0), Matrix(mo.beta1)}));
  put("R+NU", 4, 1, kron({Matrix(mo.alpha), It, Matrix(mo.omega), Matrix(V0 * mo.nu)}));
  put("R+PM", 1, 6, kron({Matrix(UK * ones(m)), It, ones(d), Matrix(V0), Matrix(mo.beta2)}));
  {
    Matrix cell = Matrix::Zero(lay.dims[0], lay.dims[0]);
    for (int k = 1; k < mo.K(); ++k)
      cell += kron({level_selector(mo, k), It, Id,
                    Matrix(mo.p[k - 1] * V0 * mo.nu)});
    put("R+NVP", 1, 1, cell);
  }

  proc.generator = Matrix::Zero(N, N);
  for (auto& [label, block] : proc.blocks) proc.generator += block;

  Vector rs = proc.generator.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i)
    if (std::abs(rs(i)) > 1e-9) {
      std::ostringstream os;
      os << "build_blocks: conservation failure at global state " << i
         << " (row sum " << rs(i) << ")";
      throw std::runtime_error(os.str());
    }
  return proc;
}

RowVector initial_distribution(const SystemModel& mo) {
  RowVector piL = mo.time_mode == TimeMode::Continuous
                      ? embedded_stationary(mo.shock_clock_cont())
                      : embedded_stationary(mo.shock_clock_disc());
  StateLayout lay = layout(mo);
  RowVector theta = RowVector::Zero(lay.total);
  theta.head(lay.dims[0]) =
      kron({Matrix(mo.alpha), Matrix(piL), Matrix(mo.omega), Matrix(mo.nu)});
  return theta;
}

}  // namespace mmaprel
