#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace xalign {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Error taxonomy, aligned with the CLI exit codes:
//   UsageError      -> 2 (malformed input)
//   InfeasibleError -> 3 (structurally impossible request, violated precondition)
//   DegenerateError -> 4 (numerically degenerate channel / failed certificate)
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pinned numerical thresholds. All rank/null-space decisions are relative to
// the largest singular value of the matrix under test.
inline constexpr double kRankTol = 1e-9;        // sigma_i / sigma_max cutoff
inline constexpr double kDefectiveCond = 1e10;  // eigenbasis cond beyond this: defective
inline constexpr double kBasisCondLimit = 1e8;  // reject eigenbasis conditioning in schemes
inline constexpr double kEigGroupTol = 1e-6;    // relative eigenvalue equality
inline constexpr double kAlignTol = 1e-8;       // alignment / exact-cancellation residual
inline constexpr double kCertTol = 1e-6;        // sigma_min/sigma_max for rank certificates
inline constexpr double kOrthoTol = 1e-10;      // orthonormality residual

struct RngSeed {
  std::uint64_t value = 1;
};

// Antenna counts: transmitters have m1, m2 antennas, receivers n1, n2.
struct AntennaConfig {
  int m1 = 1;
  int m2 = 1;
  int n1 = 1;
  int n2 = 1;

  void validate() const {
    if (m1 < 1 || m2 < 1 || n1 < 1 || n2 < 1)
      throw UsageError("antenna counts must all be >= 1");
  }
  bool square() const { return m1 == m2 && m2 == n1 && n1 == n2; }
  bool operator==(const AntennaConfig&) const = default;
};

enum class ExtensionKind { none, block_repeat, per_slot_diagonal };

// The four cross links h_ij: transmitter j -> receiver i. With a k-fold
// symbol extension h_ij is (k*n_i) x (k*m_j); block_repeat repeats the same
// base matrix on the diagonal, per_slot_diagonal holds independent slots.
struct ChannelSet {
  AntennaConfig config;
  int extension = 1;
  ExtensionKind kind = ExtensionKind::none;
  Matrix h11, h12, h21, h22;

  void validate() const;
  const Matrix& link(int rx, int tx) const {  // rx, tx in {0, 1}
    return rx == 0 ? (tx == 0 ? h11 : h12) : (tx == 0 ? h21 : h22);
  }
};

// Messages w_ij: intended for receiver i, sent by transmitter j. Enumerator
// order matches the DoF tuple order (d11, d12, d21, d22) used throughout.
enum class MessageId : int { w11 = 0, w12 = 1, w21 = 2, w22 = 3 };

inline int rx_of(MessageId m) { return static_cast<int>(m) / 2; }
inline int tx_of(MessageId m) { return static_cast<int>(m) % 2; }
inline const char* message_name(MessageId m) {
  static const char* names[] = {"w11", "w12", "w21", "w22"};
  return names[static_cast<int>(m)];
}

}  // namespace xalign
