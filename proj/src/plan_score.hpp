#pragma once

#include <algorithm>
#include <cmath>

#include "xalign/types.hpp"

// Internal scoring helpers shared by the scheme constructors. Candidate
// transmit bases that pass the hard rank certificates can still differ a lot
// in receive-side conditioning, so constructors rank them by the growth of
// the zero-forcing rate across a moderate-SNR window. Over equally spaced
// SNR points a least-squares rate slope depends only on the endpoint
// difference, which makes this gain exactly the slope such a fit measures.

namespace xalign::detail {

// Window used to rank otherwise-valid candidates.
inline constexpr double kDesignSnrLow = 1e4;   // 40 dB
inline constexpr double kDesignSnrHigh = 1e6;  // 60 dB

// log2 det(I + G^* P G) at unit noise, where G holds the desired arrivals
// already scaled by their stream amplitudes and P projects onto the
// orthogonal complement of the interference arrivals. The interference rank
// decision is floored by the overall arrival scale so exactly-cancelled
// blocks count as rank zero. Returns -1 when the factorization fails.
inline double zf_projected_rate(const Matrix& desired, const Matrix& interference) {
  const double arrival_scale = std::max(desired.norm(), interference.norm());
  Eigen::JacobiSVD<Matrix> svd(interference, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double ref = std::max(sv.size() > 0 ? sv(0) : 0.0, arrival_scale);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * ref) ++rank;
  const Matrix g = svd.matrixU().rightCols(desired.rows() - rank).adjoint() * desired;

  const Matrix a = Matrix::Identity(g.cols(), g.cols()) + g.adjoint() * g;
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) return -1.0;
  double rate = 0.0;
  const Matrix l = llt.matrixL();
  for (Eigen::Index k = 0; k < l.rows(); ++k)
    rate += 2.0 * std::log2(std::real(l(k, k)));
  return rate;
}

}  // namespace xalign::detail
