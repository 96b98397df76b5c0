#include "gsamul/metrics.hpp"

#include <string>

#include "gsamul/error.hpp"

namespace gsamul {

namespace {

void same_length(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const char* what) {
  require(a.size() == b.size(), std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
  require(a.size() >= 1, std::string(what) + ": empty series");
}

}  // namespace

double ase_component(const Eigen::VectorXd& f_true, const Eigen::VectorXd& f_est) {
  same_length(f_true, f_est, "ase_component");
  const Eigen::ArrayXd a = f_true.array() - f_true.mean();
  const Eigen::ArrayXd b = f_est.array() - f_est.mean();
  return (a - b).square().mean();
}

double ase_link(const Eigen::VectorXd& g_true, const Eigen::VectorXd& g_est) {
  same_length(g_true, g_est, "ase_link");
  return (g_true - g_est).array().square().mean();
}

double rsse(const Eigen::VectorXd& y_test, const Eigen::VectorXd& y_pred) {
  same_length(y_test, y_pred, "rsse");
  require(y_test.size() >= 2, "rsse needs at least two test points");
  const double tss = (y_test.array() - y_test.mean()).square().sum();
  if (!(tss > 0.0)) fail(ErrorCode::degenerate_input, "rsse: constant test response");
  return (y_test - y_pred).squaredNorm() / tss;
}

EvalReport evaluate(const GsamulModel& model, const Dataset& eval) {
  EvalReport rep;
  rep.n_eval = static_cast<int>(eval.rows());
  const Eigen::VectorXd pred = predict_rows(model, eval.X);
  rep.rsse = rsse(eval.y, pred);
  if (eval.truth) {
    rep.ase_link = ase_link(eval.truth->noiseless, pred);
    for (int j = 0; j < model.features(); ++j) {
      const Eigen::VectorXd est = component_values(model, j, eval.X.col(j));
      rep.ase_components.push_back(ase_component(eval.truth->components.col(j), est));
    }
  }
  return rep;
}

}  // namespace gsamul
