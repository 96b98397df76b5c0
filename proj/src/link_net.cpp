#include "gsamul/link_net.hpp"

#include <cmath>
#include <string>

#include "gsamul/error.hpp"

namespace gsamul {

Eigen::VectorXd LinkNetwork::flatten() const {
  const Eigen::Index H = w1.size();
  Eigen::VectorXd theta(3 * H + 1);
  theta.segment(0, H) = w1;
  theta.segment(H, H) = b1;
  theta.segment(2 * H, H) = w2;
  theta(3 * H) = b2;
  return theta;
}

LinkNetwork LinkNetwork::from_flat(const Eigen::VectorXd& theta) {
  require(theta.size() >= 4 && (theta.size() - 1) % 3 == 0,
          "link parameter vector must have length 3H + 1, got " + std::to_string(theta.size()));
  const Eigen::Index H = (theta.size() - 1) / 3;
  LinkNetwork net;
  net.w1 = theta.segment(0, H);
  net.b1 = theta.segment(H, H);
  net.w2 = theta.segment(2 * H, H);
  net.b2 = theta(3 * H);
  return net;
}

LinkNetwork LinkNetwork::zeros(int hidden) {
  require(hidden >= 1, "hidden size must be >= 1");
  LinkNetwork net;
  net.w1 = Eigen::VectorXd::Zero(hidden);
  net.b1 = Eigen::VectorXd::Zero(hidden);
  net.w2 = Eigen::VectorXd::Zero(hidden);
  return net;
}

LinkNetwork init_network(int hidden, Rng& rng) {
  require(hidden >= 1, "hidden size must be >= 1, got " + std::to_string(hidden));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  LinkNetwork net = LinkNetwork::zeros(hidden);
  for (int h = 0; h < hidden; ++h) net.w1(h) = unif(rng);
  for (int h = 0; h < hidden; ++h) net.b1(h) = unif(rng);
  for (int h = 0; h < hidden; ++h) net.w2(h) = unif(rng);
  net.b2 = unif(rng);
  return net;
}

double forward(const LinkNetwork& net, double u) {
  double out = net.b2;
  for (Eigen::Index h = 0; h < net.w1.size(); ++h) out += net.w2(h) * std::tanh(net.w1(h) * u + net.b1(h));
  return out;
}

double grad_input(const LinkNetwork& net, double u) {
  double out = 0.0;
  for (Eigen::Index h = 0; h < net.w1.size(); ++h) {
    const double a = std::tanh(net.w1(h) * u + net.b1(h));
    out += net.w2(h) * net.w1(h) * (1.0 - a * a);
  }
  return out;
}

Eigen::VectorXd grad_params(const LinkNetwork& net, double u) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(net.param_count());
  accumulate_grad_params(net, u, 1.0, g);
  return g;
}

void accumulate_grad_params(const LinkNetwork& net, double u, double scale, Eigen::VectorXd& acc) {
  const Eigen::Index H = net.w1.size();
  for (Eigen::Index h = 0; h < H; ++h) {
    const double a = std::tanh(net.w1(h) * u + net.b1(h));
    const double da = scale * net.w2(h) * (1.0 - a * a);
    acc(h) += da * u;
    acc(H + h) += da;
    acc(2 * H + h) += scale * a;
  }
  acc(3 * H) += scale;
}

LinkEval forward_with_slope(const LinkNetwork& net, LinkMode mode, double u) {
  if (mode == LinkMode::identity) return {u, 1.0};
  double value = net.b2;
  double slope = 0.0;
  for (Eigen::Index h = 0; h < net.w1.size(); ++h) {
    const double a = std::tanh(net.w1(h) * u + net.b1(h));
    value += net.w2(h) * a;
    slope += net.w2(h) * net.w1(h) * (1.0 - a * a);
  }
  return {value, slope};
}

void absorb_input_scale(LinkNetwork& net, double s) {
  require(s != 0.0 && std::isfinite(s), "input scale must be finite and nonzero");
  net.w1 /= s;
}

void absorb_input_shift(LinkNetwork& net, double shift) {
  require(std::isfinite(shift), "input shift must be finite");
  net.b1 += shift * net.w1;
}

void absorb_output_affine(LinkNetwork& net, double scale, double shift) {
  require(std::isfinite(scale) && std::isfinite(shift), "output affine map must be finite");
  net.w2 *= scale;
  net.b2 = scale * net.b2 + shift;
}

}  // namespace gsamul
