#include "gsamul/model.hpp"

#include <cmath>
#include <string>

#include "gsamul/error.hpp"

namespace gsamul {

AdditiveCoefficients::AdditiveCoefficients(int groups, int group_size)
    : AdditiveCoefficients(groups, group_size,
                           Eigen::VectorXd::Zero(static_cast<Eigen::Index>(groups) * group_size)) {}

AdditiveCoefficients::AdditiveCoefficients(int groups, int group_size, Eigen::VectorXd flat)
    : groups_(groups), group_size_(group_size), flat_(std::move(flat)) {
  require(groups >= 1 && group_size >= 1, "coefficients need at least one group of size >= 1");
  require(flat_.size() == static_cast<Eigen::Index>(groups) * group_size,
          "coefficient vector length " + std::to_string(flat_.size()) + " != groups * group_size");
}

double LossSpec::value(double y, double yhat) const {
  switch (kind) {
    case LossKind::least_squares: {
      const double r = y - yhat;
      return 0.5 * r * r;
    }
  }
  return 0.0;
}

double LossSpec::derivative(double y, double yhat) const {
  switch (kind) {
    case LossKind::least_squares:
      return yhat - y;
  }
  return 0.0;
}

void validate(const GsamulModel& model) {
  require(!model.bases.empty(), "model has no bases");
  require(model.alpha.groups() == model.features(), "model: alpha has " + std::to_string(model.alpha.groups()) +
                                                         " groups but there are " +
                                                         std::to_string(model.features()) + " bases");
  for (const auto& b : model.bases) {
    require(b.n_basis == model.alpha.group_size(), "model: basis size does not match alpha group size");
  }
  if (model.link_mode == LinkMode::network) {
    const auto H = model.link.w1.size();
    require(H >= 1 && model.link.b1.size() == H && model.link.w2.size() == H, "model: malformed link network");
  }
}

double additive_score(const GsamulModel& model, std::span<const double> x) {
  require(x.size() == model.bases.size(), "additive_score: expected " + std::to_string(model.bases.size()) +
                                              " features, got " + std::to_string(x.size()));
  return design_row(model.bases, x).dot(model.alpha.flat());
}

double predict(const GsamulModel& model, std::span<const double> x) {
  const double u = additive_score(model, x);
  return model.link_mode == LinkMode::identity ? u : forward(model.link, u);
}

Eigen::VectorXd predict_rows(const GsamulModel& model, const Eigen::MatrixXd& X) {
  const Eigen::VectorXd scores = design_matrix(model.bases, X) * model.alpha.flat();
  if (model.link_mode == LinkMode::identity) return scores;
  Eigen::VectorXd out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) out(i) = forward(model.link, scores(i));
  return out;
}

Eigen::VectorXd component_values(const GsamulModel& model, int j, const Eigen::VectorXd& xs) {
  require(j >= 0 && j < model.features(), "component index out of range");
  const auto& basis = model.bases[static_cast<size_t>(j)];
  Eigen::VectorXd out(xs.size());
  Eigen::VectorXd row(basis.n_basis);
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    eval_basis_into(basis, xs(i), std::span<double>(row.data(), static_cast<size_t>(row.size())));
    out(i) = row.dot(model.alpha.group(j));
  }
  return out;
}

double penalty(const AdditiveCoefficients& alpha) {
  double total = 0.0;
  for (int j = 0; j < alpha.groups(); ++j) total += alpha.group(j).norm();
  return total;
}

namespace {

double mean_loss(const GsamulModel& model, const Dataset& data, const LossSpec& loss) {
  require(data.rows() > 0, "objective on an empty dataset");
  require(data.y.size() == data.rows(), "dataset y/X row mismatch");
  const Eigen::VectorXd yhat = predict_rows(model, data.X);
  double total = 0.0;
  for (Eigen::Index i = 0; i < yhat.size(); ++i) total += loss.value(data.y(i), yhat(i));
  return total / static_cast<double>(yhat.size());
}

}  // namespace

double objective_inner(const GsamulModel& model, const Dataset& data, const LossSpec& loss, double lambda) {
  require(lambda >= 0.0, "lambda must be non-negative");
  return mean_loss(model, data, loss) + lambda * penalty(model.alpha);
}

double objective_outer(const GsamulModel& model, const Dataset& data, const LossSpec& loss) {
  return mean_loss(model, data, loss);
}

double center_components(AdditiveCoefficients& alpha, const Eigen::VectorXd& column_means) {
  require(column_means.size() == alpha.flat().size(), "center_components: column mean length mismatch");
  double total = 0.0;
  for (int j = 0; j < alpha.groups(); ++j) {
    const double m =
        column_means.segment(static_cast<Eigen::Index>(j) * alpha.group_size(), alpha.group_size()).dot(alpha.group(j));
    alpha.group(j).array() -= m;
    total += m;
  }
  return total;
}

Projection project_identifiability_scaled(const AdditiveCoefficients& alpha) {
  const double norm = alpha.flat().norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    fail(ErrorCode::degenerate_state, "identifiability projection of a zero (or non-finite) coefficient vector");
  }
  double factor = 1.0 / norm;
  if (alpha.flat()(0) < 0.0) factor = -factor;
  Projection out{AdditiveCoefficients(alpha.groups(), alpha.group_size(), alpha.flat() * factor), factor};
  return out;
}

AdditiveCoefficients project_identifiability(const AdditiveCoefficients& alpha) {
  return project_identifiability_scaled(alpha).alpha;
}

}  // namespace gsamul
