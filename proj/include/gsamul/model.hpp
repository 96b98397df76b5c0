#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gsamul/basis.hpp"
#include "gsamul/dataset.hpp"
#include "gsamul/link_net.hpp"

namespace gsamul {

// Grouped coefficients: p groups of n_basis values, stored flat and feature-major.
class AdditiveCoefficients {
 public:
  AdditiveCoefficients() = default;
  AdditiveCoefficients(int groups, int group_size);
  AdditiveCoefficients(int groups, int group_size, Eigen::VectorXd flat);

  int groups() const { return groups_; }
  int group_size() const { return group_size_; }

  const Eigen::VectorXd& flat() const { return flat_; }
  Eigen::VectorXd& flat() { return flat_; }

  auto group(int j) const { return flat_.segment(static_cast<Eigen::Index>(j) * group_size_, group_size_); }
  auto group(int j) { return flat_.segment(static_cast<Eigen::Index>(j) * group_size_, group_size_); }

 private:
  int groups_ = 0;
  int group_size_ = 0;
  Eigen::VectorXd flat_;
};

enum class LossKind { least_squares };

// Pointwise loss l(y, yhat). Least squares uses (y - yhat)^2 / 2.
struct LossSpec {
  LossKind kind = LossKind::least_squares;

  double value(double y, double yhat) const;
  double derivative(double y, double yhat) const;  // dl/dyhat
};

struct GsamulModel {
  std::vector<SplineBasis> bases;
  AdditiveCoefficients alpha;
  LinkNetwork link;
  LinkMode link_mode = LinkMode::network;

  int features() const { return static_cast<int>(bases.size()); }
};

// Throws invalid_input if bases/alpha/link shapes disagree.
void validate(const GsamulModel& model);

double additive_score(const GsamulModel& model, std::span<const double> x);
double predict(const GsamulModel& model, std::span<const double> x);
Eigen::VectorXd predict_rows(const GsamulModel& model, const Eigen::MatrixXd& X);

// Estimated component f_j evaluated at each value in xs.
Eigen::VectorXd component_values(const GsamulModel& model, int j, const Eigen::VectorXd& xs);

// sum_j ||alpha_j||_2
double penalty(const AdditiveCoefficients& alpha);

double objective_inner(const GsamulModel& model, const Dataset& data, const LossSpec& loss, double lambda);
double objective_outer(const GsamulModel& model, const Dataset& data, const LossSpec& loss);

// Subtracts from each group the constant that makes its component mean-zero
// under `column_means` (the average design row). Because every basis sums to
// one, this shifts f_j by a constant. Returns the total score shift removed.
double center_components(AdditiveCoefficients& alpha, const Eigen::VectorXd& column_means);

// Unit flattened norm with alpha_11 >= 0. factor is the multiplier that was
// applied (negative when the sign was flipped).
struct Projection {
  AdditiveCoefficients alpha;
  double factor = 1.0;
};
Projection project_identifiability_scaled(const AdditiveCoefficients& alpha);
AdditiveCoefficients project_identifiability(const AdditiveCoefficients& alpha);

}  // namespace gsamul
