#pragma once

#include "xalign/numerics.hpp"

#include <vector>

namespace xalign {

// Integer stream assignment (d11, d12, d21, d22).
struct IntTuple {
  std::array<int, 4> d{};

  int operator[](MessageId m) const { return d[static_cast<int>(m)]; }
  int total() const { return d[0] + d[1] + d[2] + d[3]; }
};

// Interference bookkeeping at one receiver. For receiver 1 the interferers
// are the messages bound for receiver 2 (streams a = d21 from tx1, b = d22
// from tx2) and the budget is n1; swap roles for receiver 2.
//   r1 = (mA - n)^+          transmit directions invisible to this receiver
//   r2 = (mB - n)^+            (per interfering transmitter)
//   r  = (mA + mB - n)^+ - r1 - r2   alignable cross pairs
//   r0 = min((a - r1)^+, (b - r2)^+, r)   pairs actually used
//   dims = (a - r1)^+ + (b - r2)^+ - r0   interference dimensions seen
struct CountMeta {
  int r1 = 0, r2 = 0, r = 0, r0 = 0;
  int dims = 0;
};

CountMeta count_interference_dims(const AntennaConfig& config, const IntTuple& d,
                                  int receiver);  // receiver in {1, 2}

// Dimension counting feasibility: receiver budgets cover desired plus
// residual interference, transmitter budgets cover their stream loads.
bool feasible_by_counting(const AntennaConfig& config, const IntTuple& d);

struct ReceiverMeta {
  int r1 = 0, r2 = 0, r = 0, r0 = 0;
};

// Beamformers for all four messages. Block v_ij holds the transmit columns
// for message w_ij at transmitter j ((extension * m_j) rows). Independent
// message blocks carry unit-norm columns and exactly counts[w] of them;
// cognitive constructions may attach carrier blocks whose scale encodes an
// exact cancellation (see cognitive.hpp).
struct BeamformingPlan {
  IntTuple counts;
  int extension = 1;
  Matrix v11, v12, v21, v22;
  ReceiverMeta rx1, rx2;          // counting meta: rx1 about (d21, d22) etc.
  int aligned_rx1 = 0;            // declared aligned pairs at receiver 1
  int aligned_rx2 = 0;

  const Matrix& block(MessageId m) const {
    switch (m) {
      case MessageId::w11: return v11;
      case MessageId::w12: return v12;
      case MessageId::w21: return v21;
      default: return v22;
    }
  }
};

struct ReceiverDiag {
  int interference_rank = 0;
  int desired_rank = 0;
  int joint_rank = 0;   // rank of [desired | interference]
  double residual = 0;  // largest sin of angle across declared aligned pairs
};

struct AlignmentDiagnostics {
  ReceiverDiag rx1, rx2;
};

// Subspace probe of a plan against its channels: received interference rank,
// desired rank, their joint rank, and the worst pairwise alignment residual.
AlignmentDiagnostics diagnose(const ChannelSet& channels, const BeamformingPlan& plan,
                              double tol = kRankTol);

// Single-shot zero-forcing/alignment construction for any assignment that
// passes feasible_by_counting: per receiver, interfering streams ride null
// directions first, then aligned cross pairs from the stacked null space,
// then isotropic remainders orthonormalized per transmitter.
BeamformingPlan construct_zero_forcing_plan(const ChannelSet& channels,
                                            const IntTuple& d, RngSeed seed);

// Identical structure but the aligned pairs are replaced by independent
// random directions; used as the misalignment baseline.
BeamformingPlan construct_misaligned_plan(const ChannelSet& channels,
                                          const IntTuple& d, RngSeed seed);

// F = h11^-1 h12 h22^-1 h21 on the stored matrices (square links required).
Matrix product_matrix_f(const ChannelSet& channels, double tol = kRankTol);

// Partition 3m spectrum values into m triples (leader, follower, follower)
// such that the leader differs from both followers beyond equality_tol
// (relative to the largest magnitude). Feasible iff no equivalence class
// exceeds 2m values. Among feasible partitions, maximizes the worst
// per-triple conditioning of the induced receiver patterns, which keeps the
// constructed plans usable at moderate SNR. Returns index triples into
// `values`.
std::vector<std::array<int, 3>> group_eigenvalues(const std::vector<Complex>& values,
                                                  int m,
                                                  double equality_tol = kEigGroupTol);

// Three-slot extension scheme for square m x m channels, m > 1: eigenvector
// patterns [1,1,0] / [1,0,1] of the replicated product matrix give every
// message m streams, i.e. 4m/3 per channel use.
BeamformingPlan construct_three_symbol_plan(const ChannelSet& base, RngSeed seed);

// Same machinery on a 3-slot per_slot_diagonal single-antenna set, where the
// product matrix is diagonal and eigenvectors are slot axes. Requires the
// per-slot product coefficients not to be all equal.
BeamformingPlan construct_time_varying_plan(const ChannelSet& channels);

}  // namespace xalign
