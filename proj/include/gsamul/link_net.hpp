#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace gsamul {

// g(u) = b2 + sum_h w2[h] * tanh(w1[h] * u + b1[h]).
// Flattened parameter order is (w1 | b1 | w2 | b2), 3H + 1 values.
struct LinkNetwork {
  Eigen::VectorXd w1;
  Eigen::VectorXd b1;
  Eigen::VectorXd w2;
  double b2 = 0.0;

  int hidden_size() const { return static_cast<int>(w1.size()); }
  int param_count() const { return 3 * hidden_size() + 1; }

  Eigen::VectorXd flatten() const;
  static LinkNetwork from_flat(const Eigen::VectorXd& theta);
  static LinkNetwork zeros(int hidden);
};

// Identity mode replaces the network by g(u) = u with no trainable parameters.
enum class LinkMode { network, identity };

using Rng = std::mt19937_64;

// Every parameter drawn i.i.d. from U(0, 1).
LinkNetwork init_network(int hidden, Rng& rng);

double forward(const LinkNetwork& net, double u);
double grad_input(const LinkNetwork& net, double u);
Eigen::VectorXd grad_params(const LinkNetwork& net, double u);

// Value and dg/du in one pass.
struct LinkEval {
  double value;
  double slope;
};
LinkEval forward_with_slope(const LinkNetwork& net, LinkMode mode, double u);

// Accumulates scale * dg/dtheta into acc (size 3H + 1).
void accumulate_grad_params(const LinkNetwork& net, double u, double scale, Eigen::VectorXd& acc);

// Reparameterizes the network so that g_new(s * u) == g_old(u).
void absorb_input_scale(LinkNetwork& net, double s);

// Reparameterizes the network so that g_new(u) == g_old(u + shift).
void absorb_input_shift(LinkNetwork& net, double shift);

// Reparameterizes the network so that g_new(u) == scale * g_old(u) + shift.
void absorb_output_affine(LinkNetwork& net, double scale, double shift);

}  // namespace gsamul
