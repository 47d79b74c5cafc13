#pragma once

// Test-side oracles, deliberately implemented with different algorithms than
// the library: Gaussian-elimination rank, closed-form 2x2 eigenvalues, and a
// dense tableau simplex for the weighted-sum LP.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "xalign/dof_region.hpp"
#include "xalign/types.hpp"

namespace oracles {

// Row-echelon rank with partial pivoting (no SVD involved).
inline int ge_rank(xalign::Matrix a, double tol = 1e-9) {
  if (a.size() == 0) return 0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return 0;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index r = 0;
  int rank = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index pivot = r;
    double best = std::abs(a(r, c));
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (std::abs(a(i, c)) > best) {
        best = std::abs(a(i, c));
        pivot = i;
      }
    }
    if (best <= tol * scale) continue;
    if (pivot != r) a.row(pivot).swap(a.row(r));
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      const xalign::Complex f = a(i, c) / a(r, c);
      a.row(i) -= f * a.row(r);
    }
    ++rank;
    ++r;
  }
  return rank;
}

// Closed-form eigenvalues of a 2x2 complex matrix.
inline std::array<xalign::Complex, 2> eig2(const xalign::Matrix& a) {
  const xalign::Complex tr = a(0, 0) + a(1, 1);
  const xalign::Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const xalign::Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

// Greedy multiset match between two spectra; true when every value in `got`
// pairs with a distinct value of `want` within tol.
inline bool spectra_match(std::vector<xalign::Complex> want,
                          std::vector<xalign::Complex> got, double tol) {
  if (want.size() != got.size()) return false;
  for (const xalign::Complex& g : got) {
    std::size_t best_i = want.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < want.size(); ++i) {
      const double d = std::abs(want[i] - g);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i == want.size() || !(best <= tol)) return false;
    want.erase(want.begin() + static_cast<std::ptrdiff_t>(best_i));
  }
  return true;
}

// Tableau simplex with Bland's rule for max c.x s.t. A x <= b, x >= 0 with
// b >= 0 (the slack basis is feasible). Returns the optimum; +inf if
// unbounded. Indices are kept as size_t throughout.
inline double simplex_max(const std::vector<std::array<double, 4>>& a,
                          const std::vector<double>& b, const std::array<double, 4>& c) {
  const std::size_t m = a.size();
  const std::size_t n = 4;
  const std::size_t width = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(width, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][n + m] = b[i];
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  const double eps = 1e-9;
  for (int iter = 0; iter < 10000; ++iter) {
    std::size_t enter = width;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (t[m][j] < -eps) {
        enter = j;  // Bland: smallest improving index
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    double best = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double aij = t[i][enter];
      if (aij > eps) {
        const double ratio = t[i][n + m] / aij;
        if (leave == m || ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
    }
    if (leave == m) return std::numeric_limits<double>::infinity();
    const double piv = t[leave][enter];
    for (double& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  return t[m][n + m];
}

// LP value of max 1.x over a DofPolytope via the simplex oracle.
inline double simplex_total(const xalign::DofPolytope& poly) {
  std::vector<std::array<double, 4>> a;
  std::vector<double> b;
  for (const xalign::Inequality& row : poly.rows) {
    a.push_back({static_cast<double>(row.c[0]), static_cast<double>(row.c[1]),
                 static_cast<double>(row.c[2]), static_cast<double>(row.c[3])});
    b.push_back(static_cast<double>(row.b));
  }
  return simplex_max(a, b, {1.0, 1.0, 1.0, 1.0});
}

}  // namespace oracles
