#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gsamul {

// Clamped B-spline basis on [domain_lo, domain_hi] with uniformly spaced
// interior knots. knots.size() == n_basis + degree + 1.
struct SplineBasis {
  int degree = 3;
  int n_basis = 0;
  std::vector<double> knots;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
};

// One design row: n_features * n_basis entries, feature-major.
using FeatureMapRow = Eigen::VectorXd;

// Builds a basis over the observed range of `column`.
// Requires n_basis >= degree + 1 and at least two distinct values.
SplineBasis build_basis(std::span<const double> column, int degree, int n_basis);

// Same construction from an explicit range.
SplineBasis make_basis(double lo, double hi, int degree, int n_basis);

// B-spline values at x (clamped into the domain), via the Cox-de Boor
// triangular scheme. Entries lie in [0, 1] and sum to one.
Eigen::VectorXd eval_basis(const SplineBasis& basis, double x);

// Writes the basis values into out (size n_basis). Returns the index of the
// first possibly-nonzero entry; at most degree + 1 entries from there on are
// nonzero.
int eval_basis_into(const SplineBasis& basis, double x, std::span<double> out);

FeatureMapRow design_row(std::span<const SplineBasis> bases, std::span<const double> x);

Eigen::MatrixXd design_matrix(std::span<const SplineBasis> bases, const Eigen::MatrixXd& X);

// Bases for every column of X.
std::vector<SplineBasis> build_bases(const Eigen::MatrixXd& X, int degree, int n_basis);

}  // namespace gsamul
