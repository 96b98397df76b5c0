#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gsamul/dataset.hpp"
#include "gsamul/model.hpp"

namespace gsamul {

struct EvalReport {
  std::vector<double> ase_components;  // one per feature
  double ase_link = 0.0;
  double rsse = 0.0;
  int n_eval = 0;
};

// Mean squared difference after mean-centering both series.
double ase_component(const Eigen::VectorXd& f_true, const Eigen::VectorXd& f_est);

// Mean squared difference of composite predictions (no centering).
double ase_link(const Eigen::VectorXd& g_true, const Eigen::VectorXd& g_est);

// Residual sum of squares over the centered total sum of squares.
double rsse(const Eigen::VectorXd& y_test, const Eigen::VectorXd& y_pred);

// Full report on a dataset. Component and link terms need ground truth; without
// it they are left empty / zero and only rsse is filled.
EvalReport evaluate(const GsamulModel& model, const Dataset& eval);

}  // namespace gsamul
