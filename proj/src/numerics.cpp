#include "xalign/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace xalign {

void ChannelSet::validate() const {
  config.validate();
  if (extension < 1) throw UsageError("extension factor must be >= 1");
  auto check = [&](const Matrix& h, int rows, int cols, const char* name) {
    if (h.rows() != rows || h.cols() != cols)
      throw UsageError(std::string(name) + ": wrong shape for config/extension");
    if (!h.allFinite()) throw UsageError(std::string(name) + ": non-finite entries");
  };
  check(h11, extension * config.n1, extension * config.m1, "h11");
  check(h12, extension * config.n1, extension * config.m2, "h12");
  check(h21, extension * config.n2, extension * config.m1, "h21");
  check(h22, extension * config.n2, extension * config.m2, "h22");
}

std::uint64_t Rng::next_u64() {
  // splitmix64 (public-domain construction); small state, full 64-bit output.
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

double Rng::next_gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_unit();
  const double u2 = next_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::next_cgauss() {
  const double re = next_gauss();
  const double im = next_gauss();
  return Complex(re, im) / std::sqrt(2.0);
}

Matrix Rng::gaussian_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = next_cgauss();
  return m;
}

ChannelSet random_channel_set(const AntennaConfig& config, RngSeed seed) {
  config.validate();
  Rng rng(seed);
  ChannelSet ch;
  ch.config = config;
  ch.h11 = rng.gaussian_matrix(config.n1, config.m1);
  ch.h12 = rng.gaussian_matrix(config.n1, config.m2);
  ch.h21 = rng.gaussian_matrix(config.n2, config.m1);
  ch.h22 = rng.gaussian_matrix(config.n2, config.m2);
  return ch;
}

namespace {

Matrix block_repeat(const Matrix& h, int k) {
  Matrix out = Matrix::Zero(h.rows() * k, h.cols() * k);
  for (int s = 0; s < k; ++s)
    out.block(s * h.rows(), s * h.cols(), h.rows(), h.cols()) = h;
  return out;
}

}  // namespace

ChannelSet extend(const ChannelSet& base, int k) {
  base.validate();
  if (base.extension != 1 || base.kind != ExtensionKind::none)
    throw UsageError("extend: input must be an unextended channel set");
  if (k < 1) throw UsageError("extend: factor must be >= 1");
  if (k == 1) return base;
  ChannelSet out;
  out.config = base.config;
  out.extension = k;
  out.kind = ExtensionKind::block_repeat;
  out.h11 = block_repeat(base.h11, k);
  out.h12 = block_repeat(base.h12, k);
  out.h21 = block_repeat(base.h21, k);
  out.h22 = block_repeat(base.h22, k);
  return out;
}

ChannelSet per_slot_channel_set(RngSeed seed, int k) {
  if (k < 1) throw UsageError("per_slot_channel_set: slot count must be >= 1");
  Rng rng(seed);
  ChannelSet ch;
  ch.config = AntennaConfig{1, 1, 1, 1};
  ch.extension = k;
  ch.kind = ExtensionKind::per_slot_diagonal;
  auto diag = [&]() {
    Matrix m = Matrix::Zero(k, k);
    for (int s = 0; s < k; ++s) m(s, s) = rng.next_cgauss();
    return m;
  };
  ch.h11 = diag();
  ch.h12 = diag();
  ch.h21 = diag();
  ch.h22 = diag();
  return ch;
}

namespace {

int rank_from_singular_values(const RealVector& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (!(smax > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * smax) ++rank;
  return rank;
}

}  // namespace

Matrix null_space(const Matrix& a, double tol) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const int rank = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixV().rightCols(a.cols() - rank);
}

int numerical_rank(const Matrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Matrix orth_basis(const Matrix& a, double tol) {
  if (a.rows() == 0) return Matrix(0, 0);
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const int rank = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixU().leftCols(rank);
}

Matrix orth_complement(const Matrix& a, double tol) {
  if (a.rows() == 0) return Matrix(0, 0);
  if (a.cols() == 0) return Matrix::Identity(a.rows(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const int rank = rank_from_singular_values(svd.singularValues(), tol);
  return svd.matrixU().rightCols(a.rows() - rank);
}

double cond_number(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

EigResult eig(const Matrix& a) {
  if (a.rows() != a.cols()) throw UsageError("eig: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success)
    throw DegenerateError("eig: eigendecomposition failed to converge");
  EigResult res;
  res.values = es.eigenvalues();
  res.vectors = es.eigenvectors();
  res.basis_cond = cond_number(res.vectors);
  return res;
}

Matrix solve_invertible(const Matrix& a, const Matrix& b, const char* what, double tol) {
  if (a.rows() != a.cols()) throw UsageError(std::string(what) + ": matrix must be square");
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > tol * sv(0)))
    throw DegenerateError(std::string(what) + ": matrix numerically singular");
  return Eigen::PartialPivLU<Matrix>(a).solve(b);
}

Matrix random_orthonormal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (cols > rows) throw UsageError("random_orthonormal: cols must be <= rows");
  const Matrix g = rng.gaussian_matrix(rows, cols);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  return q;
}

}  // namespace xalign
