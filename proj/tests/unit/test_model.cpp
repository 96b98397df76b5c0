#include <cmath>
#include <random>

#include "doctest.h"
#include "gsamul/error.hpp"
#include "gsamul/model.hpp"

using namespace gsamul;

namespace {

GsamulModel random_model(int p, int d, int H, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  GsamulModel m;
  for (int j = 0; j < p; ++j) m.bases.push_back(make_basis(0.0, 1.0, 3, d));
  m.alpha = AdditiveCoefficients(p, d);
  for (Eigen::Index k = 0; k < m.alpha.flat().size(); ++k) m.alpha.flat()(k) = z(rng);
  m.link = LinkNetwork::zeros(H);
  for (int h = 0; h < H; ++h) {
    m.link.w1(h) = z(rng);
    m.link.b1(h) = z(rng);
    m.link.w2(h) = z(rng);
  }
  m.link.b2 = z(rng);
  return m;
}

double loop_score(const GsamulModel& m, const std::vector<double>& x) {
  double s = 0.0;
  for (int j = 0; j < m.features(); ++j) {
    const auto v = eval_basis(m.bases[j], x[j]);
    for (int k = 0; k < m.alpha.group_size(); ++k) s += m.alpha.flat()(j * m.alpha.group_size() + k) * v(k);
  }
  return s;
}

double loop_link(const LinkNetwork& n, double u) {
  double s = n.b2;
  for (int h = 0; h < n.hidden_size(); ++h) s += n.w2(h) * std::tanh(n.w1(h) * u + n.b1(h));
  return s;
}

Dataset make_data(int n, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset ds;
  ds.X.resize(n, p);
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < ds.X.size(); ++i) ds.X.data()[i] = u(rng);
  for (int i = 0; i < n; ++i) ds.y(i) = 2.0 * u(rng) - 1.0;
  ds.feature_names = default_feature_names(p);
  return ds;
}

}  // namespace

TEST_CASE("coefficient shapes are checked") {
  CHECK_THROWS_AS(AdditiveCoefficients(2, 3, Eigen::VectorXd::Zero(5)), Error);
  CHECK_THROWS_AS(AdditiveCoefficients(0, 3), Error);
  AdditiveCoefficients a(2, 2, (Eigen::VectorXd(4) << 1, 2, 3, 4).finished());
  CHECK(a.group(1)(0) == 3.0);
}

TEST_CASE("additive score") {
  GsamulModel m;
  m.bases = {make_basis(0.0, 1.0, 1, 2)};
  m.alpha = AdditiveCoefficients(1, 2);
  const std::vector<double> mid{0.5};
  CHECK(additive_score(m, mid) == 0.0);
  m.alpha.flat() << 2.0, 5.0;
  CHECK(additive_score(m, mid) == doctest::Approx(3.5));
  const std::vector<double> two{0.5, 0.5};
  CHECK_THROWS_AS(additive_score(m, two), Error);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto r = random_model(3, 6, 4, rng);
    const std::vector<double> x{u(rng), u(rng), u(rng)};
    CHECK(additive_score(r, x) == doctest::Approx(loop_score(r, x)).epsilon(1e-12));
  }
}

TEST_CASE("predict composes link and score") {
  std::mt19937_64 rng(8);
  auto m = random_model(2, 5, 3, rng);
  const auto ds = make_data(10, 2, rng);
  const auto rows = predict_rows(m, ds.X);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> x{ds.X(i, 0), ds.X(i, 1)};
    CHECK(rows(i) == doctest::Approx(loop_link(m.link, loop_score(m, x))).epsilon(1e-12));
    CHECK(predict(m, x) == doctest::Approx(rows(i)).epsilon(1e-14));
  }
  m.link = LinkNetwork::zeros(3);
  const std::vector<double> x{0.2, 0.9};
  CHECK(predict(m, x) == 0.0);
  m.link_mode = LinkMode::identity;
  CHECK(predict(m, x) == additive_score(m, x));
}

TEST_CASE("component values") {
  std::mt19937_64 rng(3);
  const auto m = random_model(2, 6, 2, rng);
  Eigen::VectorXd xs(3);
  xs << 0.1, 0.5, 0.8;
  const auto v = component_values(m, 1, xs);
  for (int i = 0; i < 3; ++i) CHECK(v(i) == doctest::Approx(eval_basis(m.bases[1], xs(i)).dot(m.alpha.group(1))));
  CHECK_THROWS_AS(component_values(m, 2, xs), Error);
}

TEST_CASE("penalty") {
  CHECK(penalty(AdditiveCoefficients(3, 2)) == 0.0);
  AdditiveCoefficients a(2, 2, (Eigen::VectorXd(4) << 3, 4, 0, 0).finished());
  CHECK(penalty(a) == doctest::Approx(5.0));
  std::mt19937_64 rng(6);
  const auto m = random_model(4, 5, 1, rng);
  double oracle = 0.0;
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += std::pow(m.alpha.flat()(j * 5 + k), 2);
    oracle += std::sqrt(s);
  }
  CHECK(penalty(m.alpha) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("objectives") {
  std::mt19937_64 rng(12);
  auto m = random_model(2, 4, 3, rng);
  auto ds = make_data(20, 2, rng);
  const LossSpec ls;

  SUBCASE("perfect predictions give zero") {
    ds.y = predict_rows(m, ds.X);
    CHECK(objective_inner(m, ds, ls, 0.0) == doctest::Approx(0.0));
    CHECK(objective_outer(m, ds, ls) == doctest::Approx(0.0));
  }
  SUBCASE("zero model gives mean y squared over two") {
    m.alpha = AdditiveCoefficients(2, 4);
    m.link = LinkNetwork::zeros(3);
    CHECK(objective_inner(m, ds, ls, 1.0) == doctest::Approx(0.5 * ds.y.squaredNorm() / 20.0));
  }
  SUBCASE("direct summation") {
    double total = 0.0;
    for (int i = 0; i < 20; ++i) {
      const std::vector<double> x{ds.X(i, 0), ds.X(i, 1)};
      const double r = ds.y(i) - loop_link(m.link, loop_score(m, x));
      total += 0.5 * r * r;
    }
    CHECK(objective_outer(m, ds, ls) == doctest::Approx(total / 20).epsilon(1e-12));
    CHECK(objective_inner(m, ds, ls, 0.3) == doctest::Approx(total / 20 + 0.3 * penalty(m.alpha)).epsilon(1e-12));
  }
  Dataset empty;
  empty.X.resize(0, 2);
  CHECK_THROWS_AS(objective_outer(m, empty, ls), Error);
  CHECK_THROWS_AS(objective_inner(m, ds, ls, -1.0), Error);
}

TEST_CASE("identifiability projection") {
  AdditiveCoefficients a(1, 2, (Eigen::VectorXd(2) << 1.2, 1.6).finished());
  const auto p = project_identifiability(a);
  CHECK(p.flat()(0) == doctest::Approx(0.6));
  CHECK(p.flat()(1) == doctest::Approx(0.8));
  AdditiveCoefficients b(1, 2, (Eigen::VectorXd(2) << -0.6, 0.8).finished());
  const auto q = project_identifiability_scaled(b);
  CHECK(q.alpha.flat()(0) == doctest::Approx(0.6));
  CHECK(q.alpha.flat()(1) == doctest::Approx(-0.8));
  CHECK(q.factor == doctest::Approx(-1.0));
  CHECK_THROWS_AS(project_identifiability(AdditiveCoefficients(2, 2)), Error);
  try {
    project_identifiability(AdditiveCoefficients(2, 2));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_state);
  }

  std::mt19937_64 rng(30);
  for (int rep = 0; rep < 50; ++rep) {
    const auto m = random_model(3, 4, 1, rng);
    const auto r = project_identifiability(m.alpha);
    CHECK(std::abs(r.flat().norm() - 1.0) < 1e-12);
    CHECK(r.flat()(0) >= 0.0);
    const double cosine = std::abs(r.flat().dot(m.alpha.flat())) / m.alpha.flat().norm();
    CHECK(cosine == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("projection with link compensation leaves predictions unchanged") {
  std::mt19937_64 rng(31);
  auto m = random_model(2, 5, 4, rng);
  const auto ds = make_data(15, 2, rng);
  const auto before = predict_rows(m, ds.X);
  const auto proj = project_identifiability_scaled(m.alpha);
  m.alpha = proj.alpha;
  absorb_input_scale(m.link, proj.factor);
  CHECK((predict_rows(m, ds.X) - before).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("centering shifts each component by a constant") {
  std::mt19937_64 rng(40);
  auto m = random_model(3, 6, 4, rng);
  const auto ds = make_data(50, 3, rng);
  const Eigen::MatrixXd psi = design_matrix(m.bases, ds.X);
  const Eigen::VectorXd means = psi.colwise().mean().transpose();
  const auto before = predict_rows(m, ds.X);
  const auto old = m.alpha;
  const double removed = center_components(m.alpha, means);
  for (int j = 0; j < 3; ++j) {
    const Eigen::VectorXd f = psi.middleCols(j * 6, 6) * m.alpha.group(j);
    CHECK(std::abs(f.mean()) < 1e-12);
    const Eigen::VectorXd diff = psi.middleCols(j * 6, 6) * (old.group(j) - m.alpha.group(j));
    CHECK(diff.maxCoeff() - diff.minCoeff() < 1e-12);
  }
  absorb_input_shift(m.link, removed);
  CHECK((predict_rows(m, ds.X) - before).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(center_components(m.alpha, Eigen::VectorXd::Zero(3)), Error);
}
