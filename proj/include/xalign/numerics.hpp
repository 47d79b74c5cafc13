#pragma once

#include "xalign/types.hpp"

namespace xalign {

// Deterministic stream of complex circularly-symmetric Gaussians built from
// splitmix64 + Box-Muller. Identical seeds reproduce identical streams on
// every run; no library distribution object is involved, so the byte-exact
// output is pinned by this code alone.
class Rng {
 public:
  explicit Rng(RngSeed seed) : state_(seed.value) {}

  std::uint64_t next_u64();
  double next_unit();   // uniform in (0, 1)
  double next_gauss();  // standard normal
  Complex next_cgauss();  // CN(0, 1): variance 1/2 per real component

  // Row-major fill so the draw order is part of the contract.
  Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// i.i.d. CN(0,1) base channels, filled in the order h11, h12, h21, h22.
ChannelSet random_channel_set(const AntennaConfig& config, RngSeed seed);

// k-fold block-diagonal repetition of a base (unextended) channel set.
ChannelSet extend(const ChannelSet& base, int k);

// Single-antenna time-varying channel over k slots: every link is a k x k
// diagonal with independent draws per slot (order h11, h12, h21, h22).
ChannelSet per_slot_channel_set(RngSeed seed, int k);

// SVD-based kernel: orthonormal columns spanning {x : a x = 0}.
Matrix null_space(const Matrix& a, double tol = kRankTol);

int numerical_rank(const Matrix& a, double tol = kRankTol);

// Orthonormal basis of the column space / of its orthogonal complement.
Matrix orth_basis(const Matrix& a, double tol = kRankTol);
Matrix orth_complement(const Matrix& a, double tol = kRankTol);

// sigma_max / sigma_min; +inf when singular.
double cond_number(const Matrix& a);

struct EigResult {
  Vector values;
  Matrix vectors;     // unit columns, same order as values
  double basis_cond;  // condition number of the eigenvector matrix
  bool defective(double limit = kDefectiveCond) const { return !(basis_cond < limit); }
};

EigResult eig(const Matrix& a);

// Solves a x = b for square invertible a; throws DegenerateError naming
// `what` when a is singular at the given tolerance.
Matrix solve_invertible(const Matrix& a, const Matrix& b, const char* what,
                        double tol = kRankTol);

// Haar-like random orthonormal columns (QR of a Gaussian draw).
Matrix random_orthonormal(Rng& rng, Eigen::Index rows, Eigen::Index cols);

}  // namespace xalign
