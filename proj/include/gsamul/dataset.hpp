#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gsamul {

// Ground truth attached to synthetic draws.
struct GroundTruth {
  std::vector<int> informative;  // 0-based feature indices with nonzero f_j
  Eigen::MatrixXd components;    // n x p, true f_j(x_ij) (zero columns for inert features)
  Eigen::VectorXd scores;        // n, true additive score sum_j f_j(x_ij)
  Eigen::VectorXd noiseless;     // n, true g(score)
};

struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> feature_names;
  std::optional<GroundTruth> truth;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index features() const { return X.cols(); }
};

// Checks shape consistency and finiteness; throws invalid_input.
void validate(const Dataset& ds);

// Rows of ds in the given order (ground truth subset alongside).
Dataset take_rows(const Dataset& ds, const std::vector<int>& rows);

std::vector<std::string> default_feature_names(int p);

}  // namespace gsamul
