#pragma once

#include "mmaprel/matkit.hpp"

#include <string>
#include <vector>

namespace mmaprel {

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
  void fail(std::string msg) {
    ok = false;
    issues.push_back(std::move(msg));
  }
};

// (init, sub) with sub a sub-generator; exit vector is -sub e.
struct ContinuousPH {
  RowVector init;
  Matrix sub;
  Eigen::Index order() const { return sub.rows(); }
  Vector exit() const { return -sub.rowwise().sum(); }
};

// (init, sub) with sub sub-stochastic; exit vector is e - sub e.
struct DiscretePH {
  RowVector init;
  Matrix sub;
  Eigen::Index order() const { return sub.rows(); }
  Vector exit() const { return Vector::Ones(sub.rows()) - sub.rowwise().sum(); }
};

ValidationReport validate(const ContinuousPH& ph);
ValidationReport validate(const DiscretePH& ph);

// init (-sub)^-1 e  /  init (I - sub)^-1 e.
double mean(const ContinuousPH& ph);
double mean(const DiscretePH& ph);

// P(absorption time > t)  /  P(absorption period > n).
double survival(const ContinuousPH& ph, double t);
double survival(const DiscretePH& ph, long long n);

// Stationary vector of the renewal chain sub + exit * init.
RowVector embedded_stationary(const ContinuousPH& ph);
RowVector embedded_stationary(const DiscretePH& ph);

}  // namespace mmaprel
