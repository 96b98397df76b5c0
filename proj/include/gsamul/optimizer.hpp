#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gsamul/dataset.hpp"
#include "gsamul/link_net.hpp"
#include "gsamul/model.hpp"

namespace gsamul {

struct TrainConfig {
  double lambda = 1e-3;
  int iters = 1000;         // T
  int batch_size = 32;      // n', clamped to the training size
  double c = 1.0;           // step-size constant
  // Smoothness constant. 8 bounds the curvature seen over the first few
  // hundred iterations on Example A; long runs are limited by c / sqrt(T).
  // TrainTrace::end_curvature reports the value reached for other data.
  double l_hat = 8.0;
  std::uint64_t seed = 0;
  bool identity_link = false;
  double group_floor = 1e-8;
  // Network mode only: fit on (y - mean) / sd of the training response, then
  // fold the affine map into the output layer. Trace objectives are reported
  // on the standardized scale.
  bool standardize_response = true;
  // Network mode only: start alpha from a ridge additive least-squares fit
  // (centered, projected) instead of U(0, 1) draws.
  bool warm_start = true;
  double warm_ridge = 1e-2;  // ridge weight per training row
  // When false the trace keeps only the initial objectives; divergence is
  // still detected from the parameters.
  bool record_trace = true;
};

// Basis and network sizes.
struct Hyper {
  int degree = 3;
  int n_basis = 6;
  int hidden = 10;
};

struct TraceRecord {
  int t = 0;
  double inner_objective = 0.0;  // penalized training objective after the update
  double outer_objective = 0.0;  // validation objective after the update
  double grad_norm_sq = 0.0;     // ||grad_theta outer||^2 at (alpha_bar, theta^(t))
  std::vector<double> group_norms;
};

struct TrainTrace {
  double end_curvature = 0.0;  // estimate_smoothness at the final iterate, standardized scale
  double initial_inner = 0.0;
  double initial_outer = 0.0;
  std::vector<TraceRecord> records;
};

struct StepSizes {
  double eta;
  double nu;
};

// eta_t = nu_t = min(1 / l_hat, c / sqrt(T)).
StepSizes lr_schedule(int t, const TrainConfig& config);

// Training or validation rows mapped through the bases.
struct DesignedSet {
  Eigen::MatrixXd psi;  // n x (p * d)
  Eigen::VectorXd y;
};

DesignedSet make_designed(std::span<const SplineBasis> bases, const Dataset& data);

// Gradient of the mean loss over `rows` (all rows if empty) with respect to alpha.
Eigen::VectorXd loss_grad_alpha(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                                const DesignedSet& set, std::span<const int> rows, const LossSpec& loss);

// Gradient of the mean validation loss with respect to theta.
Eigen::VectorXd loss_grad_theta(const AdditiveCoefficients& alpha, const LinkNetwork& link, const DesignedSet& set,
                                const LossSpec& loss);

// Group shrinkage max(0, 1 - eta * lambda / max(||alpha_j||, floor)) followed by
// the gradient move.
AdditiveCoefficients shrink_and_step(const AdditiveCoefficients& alpha, const Eigen::VectorXd& grad, double eta,
                                     double lambda, double group_floor);

// Minibatch step on the training objective; returns alpha_bar.
AdditiveCoefficients inner_step(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                                const DesignedSet& train, std::span<const int> minibatch, double eta, double lambda,
                                const LossSpec& loss, double group_floor);

// Full-batch validation gradient step on theta.
LinkNetwork outer_step(const LinkNetwork& link, const AdditiveCoefficients& alpha_bar, const DesignedSet& val,
                       double nu, const LossSpec& loss);

// Full-batch training refresh of alpha at theta^(t+1), before projection.
AdditiveCoefficients alpha_step_raw(const AdditiveCoefficients& alpha, const LinkNetwork& link_next, LinkMode mode,
                                    const DesignedSet& train, double eta, double lambda, const LossSpec& loss,
                                    double group_floor);

// alpha_step_raw followed by the identifiability projection.
AdditiveCoefficients alpha_step(const AdditiveCoefficients& alpha, const LinkNetwork& link_next,
                                const DesignedSet& train, double eta, double lambda, const LossSpec& loss,
                                double group_floor);

// Largest eigenvalue of the Gauss-Newton curvature of the squared loss: in
// alpha over the training rows and, in network mode, in theta over the
// validation rows. The larger of the two is returned.
double estimate_smoothness(const AdditiveCoefficients& alpha, const LinkNetwork& link, LinkMode mode,
                           const DesignedSet& train, const DesignedSet& val);

struct TrainResult {
  GsamulModel model;
  TrainTrace trace;
};

TrainResult train(const Dataset& train_set, const Dataset& val_set, const TrainConfig& config, const Hyper& hyper,
                  const LossSpec& loss = {});

double min_grad_norm(const TrainTrace& trace);

}  // namespace gsamul
