#pragma once

#include "xalign/cognitive.hpp"

namespace xalign {

// Strictly increasing SNR grid in dB; at least two points.
struct SnrSweep {
  std::vector<double> db;
  void validate() const;
};

inline SnrSweep default_sweep() { return SnrSweep{{40.0, 50.0, 60.0}}; }

// All rates are bits per channel use: the extended-block rate divided by the
// extension factor.
struct MessageRates {
  double sum = 0;
  std::array<double, 4> per_message{};
};

struct RatePoint {
  double snr_db = 0;
  double sum = 0;
  std::array<double, 4> per_message{};
};

struct RateCurve {
  std::vector<RatePoint> points;
};

struct SlopeEstimate {
  double total = 0;
  std::array<double, 4> per_message{};
  double fit_residual = 0;  // RMS residual of the total-rate fit
};

// Zero-forcing receiver: subtraction rules first, then projection onto the
// orthogonal complement of the remaining interference span; the desired
// streams are scored through the chain rule of log det(I + G G*), so the
// per-message rates add up to the receiver's joint rate exactly. Per-stream
// power is rho divided by the transmitter's total beamformer energy (the
// common maximum across transmitters when payloads are linked).
MessageRates zf_sum_rate(const ChannelSet& channels, const CognitivePlan& plan,
                         double rho, double tol = kRankTol);
MessageRates zf_sum_rate(const ChannelSet& channels, const BeamformingPlan& plan,
                         double rho, double tol = kRankTol);

RateCurve rate_curve(const ChannelSet& channels, const CognitivePlan& plan,
                     const SnrSweep& sweep, double tol = kRankTol);

// Least-squares slope of rate against log2(rho) over the sweep.
SlopeEstimate estimate_dof(const ChannelSet& channels, const CognitivePlan& plan,
                           const SnrSweep& sweep, double tol = kRankTol);
SlopeEstimate estimate_dof(const ChannelSet& channels, const BeamformingPlan& plan,
                           const SnrSweep& sweep, double tol = kRankTol);

// Slope of the same assignment with aligned pairs replaced by random
// directions; the gap to the aligned slope is the value of alignment.
SlopeEstimate misalignment_baseline(const ChannelSet& channels, const IntTuple& d,
                                    RngSeed seed, const SnrSweep& sweep);

}  // namespace xalign
