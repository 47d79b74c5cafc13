#pragma once

#include "xalign/alignment.hpp"
#include "xalign/dof_region.hpp"

#include <optional>
#include <vector>

namespace xalign {

enum class Recipient { tx1, tx2, rx1, rx2 };

struct Share {
  MessageId message;
  Recipient to;
  bool operator==(const Share&) const = default;
};

using SharingPattern = std::vector<Share>;

enum class ChannelKind { x_channel, interference };

// Total DoF per channel use for the enumerated sharing scenarios with m
// antennas everywhere. `exact` is false only for the unshared single-antenna
// X channel, where just the interval [1, 4/3) of bounds is known.
struct DofValue {
  Rational lower;
  Rational upper;
  bool exact = true;
};

DofValue dof_value(ChannelKind kind, const SharingPattern& pattern, long long m);

// Carrier block `carrier` transmits sign * (payload of `source`); the pair
// implements joint or mirrored transmission of one message across both
// transmitters, with the scale baked into the carrier block's columns.
struct LinkedPayload {
  MessageId source;
  MessageId carrier;
  double sign = 1.0;
};

// Receiver `receiver` (1 or 2) knows message `cancels` and removes its
// contribution before decoding.
struct SubtractionRule {
  int receiver;
  MessageId cancels;
};

struct CognitivePlan {
  BeamformingPlan plan;
  std::vector<LinkedPayload> linked;
  std::vector<SubtractionRule> subtractions;
};

// Two-slot scheme where transmitter 2 knows w11 and mirrors its payload so
// the w11 interference cancels exactly at receiver 2: d = (m, 0, m, m) over
// 2 uses. Requires m > 1 and m distinct product-matrix eigenvalues.
CognitivePlan cognitive_tx_plan(const ChannelSet& base, RngSeed seed);

// Two-slot scheme where receiver 2 knows w11 and subtracts it; the w21/w22
// interference at receiver 1 is aligned into m dimensions: d = (m, 0, m, m)
// over 2 uses. Same preconditions as the transmitter-side scheme.
CognitivePlan cognitive_rx_plan(const ChannelSet& base, RngSeed seed);

enum class IcCase { both_tx, both_rx, tx_and_rx };

// Interference channel with both users cognitive: d = (m, 0, 0, m) in one
// use. both_tx zero-forces each message jointly across both transmitters;
// both_rx transmits plainly and subtracts at both receivers; tx_and_rx mixes
// the two.
CognitivePlan cognitive_interference_plan(const ChannelSet& base, IcCase ic_case,
                                          RngSeed seed);

// Measured certification of a cognitive plan against its channels: desired
// and post-cancellation interference ranks per receiver (rank decisions are
// floored by the joint received scale, so exact cancellations read as rank
// zero) plus the worst cancellation/alignment residual. `passed` counts the
// four rank comparisons that hit their expected values.
struct CognitiveChecks {
  int rx1_desired_rank = 0, rx1_desired_expected = 0;
  int rx2_desired_rank = 0, rx2_desired_expected = 0;
  int rx1_interference_rank = 0, rx1_interference_expected = 0;
  int rx2_interference_rank = 0, rx2_interference_expected = 0;
  double residual = 0;
  int passed = 0;
  int total = 4;
  bool ok() const { return passed == total && residual <= kAlignTol; }
};

// Accepts the base (unextended) channel set or one already extended to the
// plan's extension factor.
CognitiveChecks verify_cognitive_plan(const ChannelSet& channels,
                                      const CognitivePlan& plan);

// Noise-covariance modification used by the converse argument: h12 is the
// n1 x m2 cross link (full column rank, n1 >= m2), h22 the direct link of
// the same transmitter. Hermitian with spectrum inside (0, 1].
Matrix modified_noise_covariance(const Matrix& h12, const Matrix& h22,
                                 double tol = kRankTol);

}  // namespace xalign
