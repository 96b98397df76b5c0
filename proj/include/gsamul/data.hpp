#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <tuple>
#include <utility>

#include "gsamul/dataset.hpp"

namespace gsamul {

enum class SynthExample { a, b };

struct SynthSpec {
  SynthExample example = SynthExample::a;
  int n = 500;
  int p = 2;
  double noise_sd = std::sqrt(0.1);
  std::uint64_t seed = 0;
};

// Table of true component/link functions.
namespace truth {
double example_a_component(int j, double x);  // j in {0, 1}
double example_a_link(double f);
double example_b_component(int j, double x);  // j in {0..3}
double example_b_link(double f);
}  // namespace truth

int informative_count(SynthExample example);

// X ~ U(0,1)^{n x p}; y = g(sum_j f_j(X_j)) + N(0, noise_sd^2). Extra features are inert.
Dataset gen_example_a(const SynthSpec& spec);
Dataset gen_example_b(const SynthSpec& spec);
Dataset generate(const SynthSpec& spec);

// Same distribution with the noise switched off.
Dataset gen_eval_grid(const SynthSpec& spec, int n_eval);

// Appends q columns drawn i.i.d. from U(lo, hi), named noise_1..noise_q.
Dataset augment_irrelevant(const Dataset& ds, int q, double lo, double hi, std::uint64_t seed);

// Header row required; every non-target column becomes a feature, in header order.
Dataset load_csv(const std::string& path, const std::string& target_column);

// Writes features plus the response (under `target_column`) with full precision.
void write_csv(const Dataset& ds, const std::string& path, const std::string& target_column = "y");

// Sidecar JSON holding ground truth for synthetic data.
void write_truth_json(const Dataset& ds, const SynthSpec& spec, const std::string& path);

struct SplitParts {
  Dataset train;
  Dataset val;
  Dataset test;
};

// Random disjoint partition. The first two sizes use floor(f * n); the last
// part takes the remainder.
SplitParts split(const Dataset& ds, std::array<double, 3> fractions, std::uint64_t seed);

// Two random disjoint halves of floor(n / 2) rows; an odd row is left out.
std::pair<Dataset, Dataset> halve(const Dataset& ds, std::uint64_t seed);

}  // namespace gsamul
