#include "mmaprel/system_model.hpp"

#include "json.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace mmaprel {

namespace {

constexpr double kTol = 1e-9;

std::string join(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << "invalid model:";
  for (auto& s : issues) os << "\n  - " << s;
  return os.str();
}

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& key) {
  const json& node = j.at(key);
  if (!node.is_array() || node.empty() || !node[0].is_array())
    throw ModelError({key + ": expected array of arrays"});
  Eigen::Index rows = Eigen::Index(node.size());
  Eigen::Index cols = Eigen::Index(node[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (Eigen::Index(node[i].size()) != cols)
      throw ModelError({key + ": ragged rows"});
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = node[i][jj].get<double>();
  }
  return m;
}

RowVector parse_row(const json& j, const std::string& key) {
  const json& node = j.at(key);
  if (!node.is_array() || node.empty() || node[0].is_array())
    throw ModelError({key + ": expected flat array"});
  RowVector r(node.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = node[i].get<double>();
  return r;
}

Vector parse_col(const json& j, const std::string& key) {
  return parse_row(j, key).transpose();
}

}  // namespace

ModelError::ModelError(std::vector<std::string> issues_)
    : std::runtime_error(join(issues_)), issues(std::move(issues_)) {}

Vector SystemModel::L0() const {
  if (time_mode == TimeMode::Continuous) return -L.rowwise().sum();
  return Vector::Ones(t()) - L.rowwise().sum();
}

Vector SystemModel::C0() const { return Vector::Ones(d()) - C.rowwise().sum(); }

Vector SystemModel::V0() const {
  if (time_mode == TimeMode::Continuous) return -V.rowwise().sum();
  return Vector::Ones(v()) - V.rowwise().sum();
}

Vector SystemModel::S1_0() const {
  if (time_mode == TimeMode::Continuous) return -S1.rowwise().sum();
  return Vector::Ones(m1()) - S1.rowwise().sum();
}

Vector SystemModel::S2_0() const {
  if (time_mode == TimeMode::Continuous) return -S2.rowwise().sum();
  return Vector::Ones(m2()) - S2.rowwise().sum();
}

Matrix level_selector(const SystemModel& model, int k) {
  if (k < 1 || k > model.K()) throw std::out_of_range("level_selector: k out of range");
  Matrix u = Matrix::Zero(model.m(), model.m());
  int off = std::accumulate(model.levels.begin(), model.levels.begin() + (k - 1), 0);
  for (int i = off; i < off + model.levels[k - 1]; ++i) u(i, i) = 1.0;
  return u;
}

std::pair<Matrix, Matrix> noncritical_selectors(const SystemModel& model) {
  Matrix u = Matrix::Zero(model.m_sub(), model.m());
  u.leftCols(model.m_sub()) = Matrix::Identity(model.m_sub(), model.m_sub());
  return {u, u.transpose()};
}

StateLayout layout(const SystemModel& model) {
  StateLayout lay;
  lay.dims = {model.m() * model.t() * model.d() * model.v(),
              model.m_sub() * model.t() * model.d(),
              model.t() * model.v(),
              model.t() * model.v(),
              model.t() * model.m1(),
              model.t() * model.m2()};
  Eigen::Index off = 0;
  for (int s = 0; s < 6; ++s) {
    lay.offsets[s] = off;
    off += lay.dims[s];
  }
  lay.total = off;
  return lay;
}

ValidationReport validate(const SystemModel& model) {
  ValidationReport rep;
  const bool cont = model.time_mode == TimeMode::Continuous;

  if (model.levels.size() < 2) rep.fail("levels: need at least 2 degradation levels");
  int msum = 0;
  for (size_t k = 0; k < model.levels.size(); ++k) {
    if (model.levels[k] < 1) rep.fail("levels: nonpositive phase count");
    msum += model.levels[k];
  }
  if (msum != model.m()) rep.fail("levels: phase counts do not sum to order of T");

  auto check_dims = [&](const char* name, Eigen::Index got, Eigen::Index want) {
    if (got != want) {
      std::ostringstream os;
      os << name << ": dimension " << got << ", expected " << want;
      rep.fail(os.str());
    }
  };
  check_dims("alpha", model.alpha.size(), model.m());
  check_dims("T", model.T.cols(), model.T.rows());
  check_dims("T_r0", model.T_r0.size(), model.m());
  check_dims("T_nr0", model.T_nr0.size(), model.m());
  check_dims("gamma", model.gamma.size(), model.t());
  check_dims("W rows", model.W.rows(), model.m());
  check_dims("W cols", model.W.cols(), model.m());
  check_dims("W_r0", model.W_r0.size(), model.m());
  check_dims("W_nr0", model.W_nr0.size(), model.m());
  check_dims("C", model.C.cols(), model.C.rows());
  check_dims("omega", model.omega.size(), model.d());
  check_dims("beta1", model.beta1.size(), model.m1());
  check_dims("beta2", model.beta2.size(), model.m2());
  check_dims("nu", model.nu.size(), model.v());
  check_dims("p", Eigen::Index(model.p.size()),
             Eigen::Index(model.levels.empty() ? 0 : model.levels.size() - 1));
  if (!rep.ok) return rep;

  // wear conservation: T e + T_r0 + T_nr0 = 0 (continuous) / = e (discrete)
  Vector wear = model.T.rowwise().sum() + model.T_r0 + model.T_nr0;
  double target = cont ? 0.0 : 1.0;
  for (Eigen::Index i = 0; i < wear.size(); ++i)
    if (std::abs(wear(i) - target) > kTol) {
      std::ostringstream os;
      os << "wear conservation: row " << i + 1 << " residual " << wear(i) - target;
      rep.fail(os.str());
    }
  if (model.T_r0.minCoeff() < -kTol) rep.fail("T_r0: negative entry");
  if (model.T_nr0.minCoeff() < -kTol) rep.fail("T_nr0: negative entry");

  // shock modification conservation: W e + W_r0 + W_nr0 = e
  Vector shock = model.W.rowwise().sum() + model.W_r0 + model.W_nr0;
  for (Eigen::Index i = 0; i < shock.size(); ++i)
    if (std::abs(shock(i) - 1.0) > kTol) {
      std::ostringstream os;
      os << "shock conservation: row " << i + 1 << " residual " << shock(i) - 1.0;
      rep.fail(os.str());
    }
  if (model.W.minCoeff() < -kTol || model.W_r0.minCoeff() < -kTol ||
      model.W_nr0.minCoeff() < -kTol)
    rep.fail("shock modification: negative entry");

  if (model.omega0 < 0 || model.omega0 > 1) rep.fail("omega0: outside [0,1]");
  if (model.C.minCoeff() < -kTol) rep.fail("C: negative entry");
  if (model.C0().minCoeff() < -kTol) rep.fail("C: row mass exceeds 1");
  for (size_t k = 0; k < model.p.size(); ++k)
    if (model.p[k] < 0 || model.p[k] > 1) {
      std::ostringstream os;
      os << "p[" << k + 1 << "] = " << model.p[k] << " outside [0,1]";
      rep.fail(os.str());
    }

  auto check_ph = [&](const char* name, const RowVector& init, const Matrix& sub) {
    ValidationReport sr;
    if (cont)
      sr = validate(ContinuousPH{init, sub});
    else
      sr = validate(DiscretePH{init, sub});
    for (auto& s : sr.issues) rep.fail(std::string(name) + ": " + s);
    if (std::abs(init.sum() - 1.0) > kTol)
      rep.fail(std::string(name) + ": initial vector must carry full mass");
  };
  check_ph("internal wear", model.alpha, model.T);
  check_ph("shock clock", model.gamma, model.L);
  check_ph("corrective repair", model.beta1, model.S1);
  check_ph("preventive maintenance", model.beta2, model.S2);
  check_ph("vacation", model.nu, model.V);
  if (std::abs(model.omega.sum() - 1.0) > kTol || model.omega.minCoeff() < -kTol)
    rep.fail("omega: not a probability row");

  return rep;
}

SystemModel load_model(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& ex) {
    throw ModelError({std::string("json parse: ") + ex.what()});
  }
  SystemModel model;
  try {
    std::string mode = j.at("time_mode").get<std::string>();
    if (mode == "continuous")
      model.time_mode = TimeMode::Continuous;
    else if (mode == "discrete")
      model.time_mode = TimeMode::Discrete;
    else
      throw ModelError({"time_mode: must be \"continuous\" or \"discrete\""});
    model.levels = j.at("levels").get<std::vector<int>>();
    model.alpha = parse_row(j, "alpha");
    model.T = parse_matrix(j, "T");
    model.T_r0 = parse_col(j, "T_r0");
    model.T_nr0 = parse_col(j, "T_nr0");
    model.gamma = parse_row(j, "gamma");
    model.L = parse_matrix(j, "L");
    model.W = parse_matrix(j, "W");
    model.W_r0 = parse_col(j, "W_r0");
    model.W_nr0 = parse_col(j, "W_nr0");
    model.omega0 = j.at("omega0").get<double>();
    model.C = parse_matrix(j, "C");
    model.omega = parse_row(j, "omega");
    model.beta1 = parse_row(j, "beta1");
    model.S1 = parse_matrix(j, "S1");
    model.beta2 = parse_row(j, "beta2");
    model.S2 = parse_matrix(j, "S2");
    model.nu = parse_row(j, "nu");
    model.V = parse_matrix(j, "V");
    model.p = j.at("p").get<std::vector<double>>();
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ModelError({std::string("schema: ") + ex.what()});
  }
  ValidationReport rep = validate(model);
  if (!rep.ok) throw ModelError(rep.issues);
  return model;
}

SystemModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError({"cannot open " + path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_model(buf.str());
}

}  // namespace mmaprel
