#include "mmaprel/phase_type.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mmaprel {

namespace {

constexpr double kEps = 1e-9;

bool finite(const Matrix& m) { return m.allFinite(); }

void check_init(const RowVector& init, Eigen::Index order, ValidationReport& rep) {
  if (init.size() != order) {
    std::ostringstream os;
    os << "init length " << init.size() << " != order " << order;
    rep.fail(os.str());
    return;
  }
  for (Eigen::Index i = 0; i < init.size(); ++i)
    if (init(i) < -kEps) {
      std::ostringstream os;
      os << "init(" << i << ") = " << init(i) << " negative";
      rep.fail(os.str());
    }
  if (init.sum() > 1.0 + kEps) {
    std::ostringstream os;
    os << "init mass " << init.sum() << " exceeds 1";
    rep.fail(os.str());
  }
}

}  // namespace

ValidationReport validate(const ContinuousPH& ph) {
  ValidationReport rep;
  if (ph.sub.rows() != ph.sub.cols()) {
    rep.fail("sub-generator not square");
    return rep;
  }
  if (!finite(ph.sub) || !ph.init.allFinite()) {
    rep.fail("non-finite entry");
    return rep;
  }
  check_init(ph.init, ph.sub.rows(), rep);
  for (Eigen::Index i = 0; i < ph.sub.rows(); ++i) {
    if (ph.sub(i, i) >= 0 && ph.sub.rows() > 0) {
      std::ostringstream os;
      os << "diagonal sub(" << i << "," << i << ") = " << ph.sub(i, i) << " not negative";
      rep.fail(os.str());
    }
    double rs = ph.sub.row(i).sum();
    if (rs > kEps) {
      std::ostringstream os;
      os << "row " << i << " sum " << rs << " positive";
      rep.fail(os.str());
    }
    for (Eigen::Index j = 0; j < ph.sub.cols(); ++j)
      if (i != j && ph.sub(i, j) < -kEps) {
        std::ostringstream os;
        os << "off-diagonal sub(" << i << "," << j << ") = " << ph.sub(i, j) << " negative";
        rep.fail(os.str());
      }
  }
  return rep;
}

ValidationReport validate(const DiscretePH& ph) {
  ValidationReport rep;
  if (ph.sub.rows() != ph.sub.cols()) {
    rep.fail("sub-stochastic matrix not square");
    return rep;
  }
  if (!finite(ph.sub) || !ph.init.allFinite()) {
    rep.fail("non-finite entry");
    return rep;
  }
  check_init(ph.init, ph.sub.rows(), rep);
  for (Eigen::Index i = 0; i < ph.sub.rows(); ++i) {
    double rs = ph.sub.row(i).sum();
    if (rs > 1.0 + kEps) {
      std::ostringstream os;
      os << "row " << i << " mass " << rs << " exceeds 1";
      rep.fail(os.str());
    }
    for (Eigen::Index j = 0; j < ph.sub.cols(); ++j)
      if (ph.sub(i, j) < -kEps || ph.sub(i, j) > 1.0 + kEps) {
        std::ostringstream os;
        os << "sub(" << i << "," << j << ") = " << ph.sub(i, j) << " outside [0,1]";
        rep.fail(os.str());
      }
  }
  return rep;
}

double mean(const ContinuousPH& ph) {
  Eigen::PartialPivLU<Matrix> lu(-ph.sub);
  Vector m = lu.solve(Vector::Ones(ph.order()));
  if (!m.allFinite()) throw std::runtime_error("mean: absorption unreachable");
  return ph.init * m;
}

double mean(const DiscretePH& ph) {
  Matrix fundamental = Matrix::Identity(ph.order(), ph.order()) - ph.sub;
  Eigen::PartialPivLU<Matrix> lu(fundamental);
  Vector m = lu.solve(Vector::Ones(ph.order()));
  if (!m.allFinite()) throw std::runtime_error("mean: absorption unreachable");
  return ph.init * m;
}

double survival(const ContinuousPH& ph, double t) {
  if (t < 0) throw std::invalid_argument("survival: negative time");
  return ph.init * expm(ph.sub, t) * Vector::Ones(ph.order());
}

double survival(const DiscretePH& ph, long long n) {
  if (n < 0) throw std::invalid_argument("survival: negative period");
  return ph.init * matrix_power(ph.sub, n) * Vector::Ones(ph.order());
}

RowVector embedded_stationary(const ContinuousPH& ph) {
  Matrix renewal = ph.sub + ph.exit() * ph.init;
  return solve_normalized(renewal, Vector::Ones(ph.order()));
}

RowVector embedded_stationary(const DiscretePH& ph) {
  Matrix renewal = ph.sub + ph.exit() * ph.init - Matrix::Identity(ph.order(), ph.order());
  return solve_normalized(renewal, Vector::Ones(ph.order()));
}

}  // namespace mmaprel
