#include "gsamul/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gsamul/error.hpp"

namespace gsamul {

StepSizes lr_schedule(int t, const TrainConfig& config) {
  require(config.iters >= 1, "iters must be >= 1");
  require(t >= 1 && t <= config.iters, "lr_schedule: t out of range");
  require(config.c > 0.0 && config.l_hat > 0.0, "schedule constants c and l_hat must be positive");
  const double step = std::min(1.0 / config.l_hat, config.c / std::sqrt(static_cast<double>(config.iters)));
  return {step, step};
}

DesignedSet make_designed(std::span<const SplineBasis> bases, const Dataset& data) {
  require(data.rows() > 0, "empty dataset");
  return {design_matrix(bases, data.X), data.y};
}

namespace {

// dl/dyhat * dg/du for one row with score u.
double chain_weight(double y, double u, const LinkNetwork& link, LinkMode mode, const LossSpec& loss) {
  const auto ev = forward_with_slope(link, mode, u);
  return loss.derivative(y, ev.value) * ev.slope;
}

double link_value(const LinkNetwork& link, LinkMode mode, double u) {
  return mode == LinkMode::identity ? u : forward(link, u);
}

double mean_loss(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode, const DesignedSet& set,
                 const LossSpec& loss) {
  const Eigen::VectorXd scores = set.psi * alpha.flat();
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) total += loss.value(set.y(i), link_value(link, mode, scores(i)));
  return total / static_cast<double>(scores.size());
}

}  // namespace

Eigen::VectorXd loss_grad_alpha(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                                const DesignedSet& set, std::span<const int> rows, const LossSpec& loss) {
  require(set.psi.cols() == alpha.flat().size(), "design width does not match coefficient length");
  if (rows.empty()) {
    require(set.psi.rows() > 0, "gradient over an empty set");
    const Eigen::VectorXd scores = set.psi * alpha.flat();
    Eigen::VectorXd w(scores.size());
    for (Eigen::Index i = 0; i < scores.size(); ++i) w(i) = chain_weight(set.y(i), scores(i), link, mode, loss);
    return set.psi.transpose() * w / static_cast<double>(scores.size());
  }
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(alpha.flat().size());
  for (int r : rows) {
    require(r >= 0 && r < set.psi.rows(), "minibatch row out of range");
    const double u = set.psi.row(r).dot(alpha.flat());
    grad += chain_weight(set.y(r), u, link, mode, loss) * set.psi.row(r).transpose();
  }
  return grad / static_cast<double>(rows.size());
}

Eigen::VectorXd loss_grad_theta(const AdditiveCoefficients& alpha, const LinkNetwork& link, const DesignedSet& set,
                                const LossSpec& loss) {
  require(set.psi.rows() > 0, "validation set is empty");
  require(set.psi.cols() == alpha.flat().size(), "design width does not match coefficient length");
  const Eigen::VectorXd scores = set.psi * alpha.flat();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(link.param_count());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double dl = loss.derivative(set.y(i), forward(link, scores(i)));
    accumulate_grad_params(link, scores(i), dl, grad);
  }
  return grad / static_cast<double>(scores.size());
}

AdditiveCoefficients shrink_and_step(const AdditiveCoefficients& alpha, const Eigen::VectorXd& grad, double eta,
                                     double lambda, double group_floor) {
  require(group_floor > 0.0, "group floor must be positive");
  AdditiveCoefficients out = alpha;
  for (int j = 0; j < alpha.groups(); ++j) {
    const double norm = std::max(alpha.group(j).norm(), group_floor);
    const double factor = std::max(0.0, 1.0 - eta * lambda / norm);
    out.group(j) = factor * alpha.group(j) -
                   eta * grad.segment(static_cast<Eigen::Index>(j) * alpha.group_size(), alpha.group_size());
  }
  return out;
}

AdditiveCoefficients inner_step(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                                const DesignedSet& train, std::span<const int> minibatch, double eta, double lambda,
                                const LossSpec& loss, double group_floor) {
  require(!minibatch.empty(), "inner_step: empty minibatch");
  const Eigen::VectorXd grad = loss_grad_alpha(alpha, link, mode, train, minibatch, loss);
  return shrink_and_step(alpha, grad, eta, lambda, group_floor);
}

LinkNetwork outer_step(const LinkNetwork& link, const AdditiveCoefficients& alpha_bar, const DesignedSet& val,
                       double nu, const LossSpec& loss) {
  const Eigen::VectorXd grad = loss_grad_theta(alpha_bar, link, val, loss);
  return LinkNetwork::from_flat(link.flatten() - nu * grad);
}

AdditiveCoefficients alpha_step_raw(const AdditiveCoefficients& alpha, const LinkNetwork& link_next, LinkMode mode,
                                    const DesignedSet& train, double eta, double lambda, const LossSpec& loss,
                                    double group_floor) {
  const Eigen::VectorXd grad = loss_grad_alpha(alpha, link_next, mode, train, {}, loss);
  return shrink_and_step(alpha, grad, eta, lambda, group_floor);
}

AdditiveCoefficients alpha_step(const AdditiveCoefficients& alpha, const LinkNetwork& link_next,
                                const DesignedSet& train, double eta, double lambda, const LossSpec& loss,
                                double group_floor) {
  return project_identifiability(
      alpha_step_raw(alpha, link_next, LinkMode::network, train, eta, lambda, loss, group_floor));
}

namespace {

std::vector<double> group_norms_of(const AdditiveCoefficients& alpha) {
  std::vector<double> out(static_cast<size_t>(alpha.groups()));
  for (int j = 0; j < alpha.groups(); ++j) out[static_cast<size_t>(j)] = alpha.group(j).norm();
  return out;
}

}  // namespace

TrainResult train(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config, const Hyper& hyper,
                  const LossSpec& loss) {
  validate(train_set);
  validate(val_set);
  require(train_set.rows() > 0, "training set is empty");
  require(val_set.rows() > 0, "validation set is empty");
  require(train_set.features() == val_set.features(), "training and validation sets differ in feature count");
  require(config.iters >= 1, "iters must be >= 1");
  require(config.batch_size >= 1, "batch_size must be >= 1");
  require(config.lambda >= 0.0 && std::isfinite(config.lambda), "lambda must be finite and >= 0");
  require(config.group_floor > 0.0, "group_floor must be positive");

  const LinkMode mode = config.identity_link ? LinkMode::identity : LinkMode::network;
  const auto p = static_cast<int>(train_set.features());

  GsamulModel model;
  model.bases = build_bases(train_set.X, hyper.degree, hyper.n_basis);
  model.link_mode = mode;
  DesignedSet tr = make_designed(model.bases, train_set);
  DesignedSet va = make_designed(model.bases, val_set);

  double y_shift = 0.0;
  double y_scale = 1.0;
  if (mode == LinkMode::network && config.standardize_response && train_set.rows() >= 2) {
    y_shift = tr.y.mean();
    const double sd = std::sqrt((tr.y.array() - y_shift).square().sum() / static_cast<double>(tr.y.size() - 1));
    if (sd > 0.0 && std::isfinite(sd)) y_scale = sd;
    tr.y = (tr.y.array() - y_shift) / y_scale;
    va.y = (va.y.array() - y_shift) / y_scale;
  }

  Rng rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  model.alpha = AdditiveCoefficients(p, hyper.n_basis);
  for (Eigen::Index k = 0; k < model.alpha.flat().size(); ++k) model.alpha.flat()(k) = unif(rng);
  // Average design row; used to keep each component mean-zero on the
  // training inputs so the unit-norm budget is not spent on constant offsets.
  const Eigen::VectorXd psi_mean = tr.psi.colwise().mean().transpose();
  if (mode == LinkMode::network) {
    if (config.warm_start) {
      const Eigen::Index k = tr.psi.cols();
      Eigen::MatrixXd gram = tr.psi.transpose() * tr.psi;
      gram.diagonal().array() += config.warm_ridge * static_cast<double>(tr.psi.rows());
      const Eigen::VectorXd rhs = tr.psi.transpose() * (tr.y.array() - tr.y.mean()).matrix();
      const Eigen::VectorXd sol = gram.ldlt().solve(rhs);
      if (sol.allFinite() && sol.size() == k) model.alpha.flat() = sol;
    }
    center_components(model.alpha, psi_mean);
    Projection proj;
    try {
      proj = project_identifiability_scaled(model.alpha);
    } catch (const Error&) {
      // Constant response: nothing to fit, fall back to the random draw.
      for (Eigen::Index k = 0; k < model.alpha.flat().size(); ++k) model.alpha.flat()(k) = unif(rng);
      center_components(model.alpha, psi_mean);
      proj = project_identifiability_scaled(model.alpha);
    }
    model.alpha = std::move(proj.alpha);
    model.link = init_network(hyper.hidden, rng);
    // Keep the initial link increasing along the warm-start direction.
    if (config.warm_start && proj.factor < 0.0) absorb_input_scale(model.link, -1.0);
  }

  const int n = static_cast<int>(train_set.rows());
  const int batch = std::min(config.batch_size, n);
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);

  TrainTrace trace;
  trace.initial_inner = mean_loss(model.alpha, model.link, mode, tr, loss) + config.lambda * penalty(model.alpha);
  trace.initial_outer = mean_loss(model.alpha, model.link, mode, va, loss);
  if (config.record_trace) trace.records.reserve(static_cast<size_t>(config.iters));

  for (int t = 1; t <= config.iters; ++t) {
    const auto [eta, nu] = lr_schedule(t, config);

    for (int k = 0; k < batch; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(perm[static_cast<size_t>(k)], perm[static_cast<size_t>(pick(rng))]);
    }
    const std::span<const int> minibatch(perm.data(), static_cast<size_t>(batch));

    const AdditiveCoefficients alpha_bar =
        inner_step(model.alpha, model.link, mode, tr, minibatch, eta, config.lambda, loss, config.group_floor);

    double grad_sq = 0.0;
    if (mode == LinkMode::network) {
      const Eigen::VectorXd g = loss_grad_theta(alpha_bar, model.link, va, loss);
      grad_sq = g.squaredNorm();
      model.link = LinkNetwork::from_flat(model.link.flatten() - nu * g);
    }

    AdditiveCoefficients next =
        alpha_step_raw(model.alpha, model.link, mode, tr, eta, config.lambda, loss, config.group_floor);
    if (mode == LinkMode::network) {
      absorb_input_shift(model.link, center_components(next, psi_mean));
      Projection proj;
      try {
        proj = project_identifiability_scaled(next);
      } catch (const Error& e) {
        fail(e.code(), "training collapsed to a zero coefficient vector at iteration " + std::to_string(t) +
                           " (lambda=" + std::to_string(config.lambda) + " is too large for the step size)");
      }
      model.alpha = std::move(proj.alpha);
      // Rescaling alpha changes the score scale; compensate in the link so
      // predictions are unchanged by the projection.
      absorb_input_scale(model.link, proj.factor);
    } else {
      model.alpha = std::move(next);
    }

    if (!config.record_trace) {
      if (!model.alpha.flat().allFinite() || !std::isfinite(grad_sq) ||
          (mode == LinkMode::network && !model.link.flatten().allFinite())) {
        fail(ErrorCode::numerical_divergence, "non-finite parameters at iteration " + std::to_string(t));
      }
      continue;
    }
    TraceRecord rec;
    rec.t = t;
    rec.inner_objective = mean_loss(model.alpha, model.link, mode, tr, loss) + config.lambda * penalty(model.alpha);
    rec.outer_objective = mean_loss(model.alpha, model.link, mode, va, loss);
    rec.grad_norm_sq = grad_sq;
    rec.group_norms = group_norms_of(model.alpha);
    if (!std::isfinite(rec.inner_objective) || !std::isfinite(rec.outer_objective) || !std::isfinite(grad_sq)) {
      fail(ErrorCode::numerical_divergence, "non-finite objective at iteration " + std::to_string(t));
    }
    trace.records.push_back(std::move(rec));
  }

  trace.end_curvature = estimate_smoothness(model.alpha, model.link, mode, tr, va);
  if (mode == LinkMode::network) absorb_output_affine(model.link, y_scale, y_shift);
  return {std::move(model), std::move(trace)};
}

double estimate_smoothness(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                           const DesignedSet& train, const DesignedSet& val) {
  require(train.psi.cols() == alpha.flat().size() && val.psi.cols() == alpha.flat().size(),
          "design width does not match coefficient length");
  require(train.psi.rows() > 0 && val.psi.rows() > 0, "smoothness estimate over an empty set");
  auto top = [](const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  };
  const Eigen::VectorXd u = train.psi * alpha.flat();
  Eigen::VectorXd slope(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) slope(i) = forward_with_slope(link, mode, u(i)).slope;
  const Eigen::MatrixXd ja = train.psi.array().colwise() * slope.array();
  double l = top(ja.transpose() * ja / static_cast<double>(u.size()));
  if (mode == LinkMode::network) {
    const Eigen::VectorXd uv = val.psi * alpha.flat();
    Eigen::MatrixXd jt(uv.size(), link.param_count());
    for (Eigen::Index i = 0; i < uv.size(); ++i) jt.row(i) = grad_params(link, uv(i)).transpose();
    l = std::max(l, top(jt.transpose() * jt / static_cast<double>(uv.size())));
  }
  return l;
}

double min_grad_norm(const TrainTrace& trace) {
  require(!trace.records.empty(), "min_grad_norm of an empty trace");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) best = std::min(best, r.grad_norm_sq);
  return best;
}

}  // namespace gsamul
