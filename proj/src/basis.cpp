#include "gsamul/basis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsamul/error.hpp"

namespace gsamul {

SplineBasis make_basis(double lo, double hi, int degree, int n_basis) {
  require(degree >= 1, "spline degree must be >= 1, got " + std::to_string(degree));
  require(n_basis >= degree + 1, "n_basis must be >= degree + 1 (n_basis=" + std::to_string(n_basis) +
                                     ", degree=" + std::to_string(degree) + ")");
  require(std::isfinite(lo) && std::isfinite(hi), "basis domain must be finite");
  require(lo < hi, "degenerate basis domain: all values equal");

  SplineBasis b;
  b.degree = degree;
  b.n_basis = n_basis;
  b.domain_lo = lo;
  b.domain_hi = hi;

  const int n_interior = n_basis - degree - 1;
  b.knots.reserve(static_cast<size_t>(n_basis + degree + 1));
  for (int i = 0; i <= degree; ++i) b.knots.push_back(lo);
  for (int i = 1; i <= n_interior; ++i) {
    b.knots.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_interior + 1));
  }
  for (int i = 0; i <= degree; ++i) b.knots.push_back(hi);
  return b;
}

SplineBasis build_basis(std::span<const double> column, int degree, int n_basis) {
  require(!column.empty(), "cannot build a basis from an empty column");
  for (double v : column) require(std::isfinite(v), "non-finite value in basis column");
  const auto [mn, mx] = std::minmax_element(column.begin(), column.end());
  require(*mn < *mx, "degenerate column: all values equal");
  return make_basis(*mn, *mx, degree, n_basis);
}

namespace {

// Knot span s with knots[s] <= x < knots[s+1], s in [degree, n_basis - 1].
int find_span(const SplineBasis& b, double x) {
  const int last = b.n_basis - 1;
  if (x >= b.knots[static_cast<size_t>(last + 1)]) return last;
  const auto first = b.knots.begin() + b.degree;
  const auto end = b.knots.begin() + last + 1;
  auto it = std::upper_bound(first, end, x);
  return static_cast<int>(it - b.knots.begin()) - 1;
}

}  // namespace

int eval_basis_into(const SplineBasis& b, double x, std::span<double> out) {
  require(std::isfinite(x), "non-finite input to eval_basis");
  require(out.size() == static_cast<size_t>(b.n_basis), "eval_basis output has wrong size");
  x = std::clamp(x, b.domain_lo, b.domain_hi);

  const int p = b.degree;
  const int s = find_span(b, x);
  const auto& U = b.knots;

  // Nonzero values N[0..p] belong to basis indices s-p .. s.
  double N[32];
  double left[32];
  double right[32];
  require(p < 32, "spline degree too large");
  N[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[static_cast<size_t>(s + 1 - j)];
    right[j] = U[static_cast<size_t>(s + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = N[r] / (right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }

  std::fill(out.begin(), out.end(), 0.0);
  const int first = s - p;
  for (int r = 0; r <= p; ++r) out[static_cast<size_t>(first + r)] = N[r];
  return first;
}

Eigen::VectorXd eval_basis(const SplineBasis& basis, double x) {
  Eigen::VectorXd v(basis.n_basis);
  eval_basis_into(basis, x, std::span<double>(v.data(), static_cast<size_t>(v.size())));
  return v;
}

FeatureMapRow design_row(std::span<const SplineBasis> bases, std::span<const double> x) {
  require(x.size() == bases.size(), "design_row: expected " + std::to_string(bases.size()) +
                                        " features, got " + std::to_string(x.size()));
  require(!bases.empty(), "design_row: no bases");
  const int d = bases.front().n_basis;
  FeatureMapRow row(static_cast<Eigen::Index>(bases.size()) * d);
  for (size_t j = 0; j < bases.size(); ++j) {
    require(bases[j].n_basis == d, "design_row: all bases must share n_basis");
    eval_basis_into(bases[j], x[j], std::span<double>(row.data() + j * d, static_cast<size_t>(d)));
  }
  return row;
}

Eigen::MatrixXd design_matrix(std::span<const SplineBasis> bases, const Eigen::MatrixXd& X) {
  require(static_cast<size_t>(X.cols()) == bases.size(),
          "design_matrix: X has " + std::to_string(X.cols()) + " columns but " + std::to_string(bases.size()) +
              " bases were given");
  require(!bases.empty(), "design_matrix: no bases");
  const int d = bases.front().n_basis;
  for (const auto& b : bases) require(b.n_basis == d, "design_matrix: all bases must share n_basis");

  // Row-major scratch so each feature block is contiguous, then copy out.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> psi(X.rows(), X.cols() * d);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      eval_basis_into(bases[static_cast<size_t>(j)], X(i, j),
                      std::span<double>(psi.data() + i * psi.cols() + j * d, static_cast<size_t>(d)));
    }
  }
  return psi;
}

std::vector<SplineBasis> build_bases(const Eigen::MatrixXd& X, int degree, int n_basis) {
  std::vector<SplineBasis> out;
  out.reserve(static_cast<size_t>(X.cols()));
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const Eigen::VectorXd col = X.col(j);
    try {
      out.push_back(build_basis(std::span<const double>(col.data(), static_cast<size_t>(col.size())), degree, n_basis));
    } catch (const Error& e) {
      fail(e.code(), "feature " + std::to_string(j) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace gsamul
