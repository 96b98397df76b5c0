#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gsamul/data.hpp"
#include "gsamul/error.hpp"

using namespace gsamul;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gsamul_unit_" + name)).string();
}

}  // namespace

TEST_CASE("Example A formulas") {
  using namespace truth;
  const double f = example_a_component(0, 0.5) + example_a_component(1, 0.0);
  CHECK(f == doctest::Approx(1.0 / 3.0));
  CHECK(example_a_link(f) == doctest::Approx(0.98158).epsilon(1e-5));
  CHECK_THROWS_AS(example_a_component(2, 0.1), Error);
}

TEST_CASE("Example B formulas") {
  using namespace truth;
  CHECK(example_b_component(0, 0.0) == doctest::Approx(-0.6 / std::numbers::pi));
  CHECK(example_b_component(1, 0.5) == doctest::Approx(-1.0 / 24.0));
  CHECK(example_b_component(2, 0.0) == doctest::Approx(0.4 * std::numbers::e));
  CHECK(example_b_component(3, 1.0) == doctest::Approx(std::log(2.0) - 0.5));
  const double f = example_b_component(0, 0.0) + example_b_component(1, 0.5) + example_b_component(2, 0.0) +
                   example_b_component(3, 1.0);
  CHECK(f == doctest::Approx(1.04781).epsilon(1e-5));
  // exp(0.25 * 1.0478073) evaluated by hand.
  CHECK(example_b_link(f) == doctest::Approx(1.299464).epsilon(1e-6));
}

TEST_CASE("Monte Carlo checks on the generators") {
  SynthSpec s;
  s.n = 100000;
  s.p = 2;
  s.seed = 7;
  const auto a = gen_example_a(s);
  CHECK(std::abs(a.X.col(0).mean() - 0.5) < 0.01);
  CHECK(a.X.minCoeff() >= 0.0);
  CHECK(a.X.maxCoeff() < 1.0);
  const double resid_var = (a.y - a.truth->noiseless).array().square().mean();
  CHECK(resid_var == doctest::Approx(0.1).epsilon(0.03));

  double acc = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000000; ++i) acc += truth::example_b_component(1, u(rng));
  CHECK(std::abs(acc / 1e6) < 0.005);
}

TEST_CASE("generator contracts") {
  SynthSpec s;
  s.n = 50;
  s.p = 5;
  s.noise_sd = 0.0;
  s.seed = 1;
  const auto a = gen_example_a(s);
  CHECK((a.y - a.truth->noiseless).norm() == 0.0);
  CHECK(a.truth->components.col(3).norm() == 0.0);
  CHECK(a.truth->informative == std::vector<int>{0, 1});
  s.noise_sd = 0.5;
  const auto a1 = generate(s), a2 = generate(s);
  CHECK((a1.X - a2.X).norm() == 0.0);
  CHECK((a1.y - a2.y).norm() == 0.0);
  s.example = SynthExample::b;
  s.p = 3;
  CHECK_THROWS_AS(generate(s), Error);
  s.example = SynthExample::a;
  s.p = 1;
  CHECK_THROWS_AS(generate(s), Error);
  s.p = 2;
  const auto grid = gen_eval_grid(s, 1000);
  CHECK(grid.rows() == 1000);
  CHECK((grid.y - grid.truth->noiseless).norm() == 0.0);
}

TEST_CASE("augmentation") {
  SynthSpec s;
  s.n = 5000;
  const auto ds = generate(s);
  const auto same = augment_irrelevant(ds, 0, -0.5, 0.5, 1);
  CHECK((same.X - ds.X).norm() == 0.0);
  const auto big = augment_irrelevant(ds, 20, -0.5, 0.5, 1);
  CHECK(big.features() == 22);
  CHECK(big.feature_names.back() == "noise_20");
  CHECK((big.X.leftCols(2) - ds.X).norm() == 0.0);
  for (int k = 2; k < 22; ++k) {
    CHECK(std::abs(big.X.col(k).mean()) < 0.03);
    CHECK(big.X.col(k).minCoeff() >= -0.5);
    CHECK(big.X.col(k).maxCoeff() <= 0.5);
  }
  CHECK(big.truth->components.cols() == 22);
  CHECK_THROWS_AS(augment_irrelevant(ds, 2, 1.0, 1.0, 1), Error);
}

TEST_CASE("CSV round trip and errors") {
  SynthSpec s;
  s.n = 20;
  s.p = 3;
  const auto ds = generate(s);
  const auto path = temp_path("roundtrip.csv");
  write_csv(ds, path, "target");
  const auto back = load_csv(path, "target");
  CHECK(back.feature_names == ds.feature_names);
  CHECK((back.X - ds.X).norm() == 0.0);
  CHECK((back.y - ds.y).norm() == 0.0);
  CHECK_THROWS_AS(load_csv(path, "missing"), Error);
  CHECK_THROWS_AS(load_csv(temp_path("does_not_exist.csv"), "y"), Error);

  const auto bad = temp_path("bad.csv");
  {
    std::ofstream o(bad);
    o << "a,b,y\n1,2,3\n1,oops,3\n";
  }
  try {
    load_csv(bad, "y");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("row 3") != std::string::npos);
  }
  // The target may sit anywhere in the header.
  {
    std::ofstream o(bad);
    o << "y,a\n1,2\n3,4\n";
  }
  const auto mid = load_csv(bad, "y");
  CHECK(mid.feature_names == std::vector<std::string>{"a"});
  CHECK(mid.y(1) == 3.0);
  std::remove(path.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("split and halve") {
  SynthSpec s;
  s.n = 101;
  const auto ds = generate(s);
  const auto parts = split(ds, {0.4, 0.4, 0.2}, 3);
  CHECK(parts.train.rows() == 40);
  CHECK(parts.val.rows() == 40);
  CHECK(parts.test.rows() == 21);
  // Disjoint and covering: sums of row fingerprints match.
  const double total = ds.X.col(0).sum();
  CHECK(parts.train.X.col(0).sum() + parts.val.X.col(0).sum() + parts.test.X.col(0).sum() ==
        doctest::Approx(total));
  CHECK_THROWS_AS(split(ds, {0.5, 0.5, 0.0}, 3), Error);
  CHECK_THROWS_AS(split(ds, {0.5, 0.4, 0.2}, 3), Error);
  const auto [h1, h2] = halve(ds, 9);
  CHECK(h1.rows() == 50);
  CHECK(h2.rows() == 50);
  CHECK(h1.truth.has_value());
  const auto again = halve(ds, 9);
  CHECK((again.first.X - h1.X).norm() == 0.0);
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.X = Eigen::MatrixXd::Zero(3, 2);
  d.y = Eigen::VectorXd::Zero(2);
  d.feature_names = default_feature_names(2);
  CHECK_THROWS_AS(validate(d), Error);
  d.y = Eigen::VectorXd::Zero(3);
  CHECK_NOTHROW(validate(d));
  d.X(0, 0) = std::nan("");
  CHECK_THROWS_AS(validate(d), Error);
}
