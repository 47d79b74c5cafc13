#include "xalign/cognitive.hpp"

#include "plan_score.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "xalign/numerics.hpp"

namespace xalign {

namespace {

// sigma_min / sigma_max of a stacked certificate matrix must clear the
// certificate tolerance, otherwise the construction is numerically rank
// deficient and we refuse to report success.
void check_sigma_ratio(const Matrix& m, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  double smax = s.size() > 0 ? s(0) : 0.0;
  double smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
  if (m.rows() < m.cols() || smax <= 0.0 || smin <= kCertTol * smax) {
    throw DegenerateError(std::string(what) + ": certificate matrix is rank deficient");
  }
}

void normalize_columns(Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double n = m.col(j).norm();
    if (n > 0.0) m.col(j) /= n;
  }
}

// Candidate private bases drawn per construction; the best-scoring one wins.
constexpr int kPrivateBasisDraws = 48;

// Eigen-structure shared by both cognitive constructions: the two-slot
// repeated channel, the eigenbasis of F = h11^{-1} h12 h22^{-1} h21 with all
// eigenvalues pairwise distinct, and the cross-steered pair (v21, v22).
struct CognitiveCore {
  ChannelSet ch2;      // two-slot block extension
  Matrix fbar;         // block-diagonal two-slot copy of F
  Matrix v21, v22;     // m columns of height 2m each
  int m = 0;
};

CognitiveCore build_cognitive_core(const ChannelSet& base, const char* scheme) {
  base.validate();
  if (base.extension != 1) {
    throw UsageError(std::string(scheme) + ": channel set must be unextended");
  }
  if (!base.config.square()) {
    throw UsageError(std::string(scheme) + ": requires m1 == m2 == n1 == n2");
  }
  const int m = base.config.m1;
  if (m < 2) {
    throw InfeasibleError(std::string(scheme) +
                          ": needs at least 2 antennas per node for the two-slot split");
  }

  Matrix f = product_matrix_f(base);
  EigResult ed = eig(f);
  if (ed.defective(kBasisCondLimit)) {
    throw DegenerateError(std::string(scheme) + ": channel product matrix is defective");
  }
  // Pairwise-distinct eigenvalues are required: the rank certificates below
  // degenerate whenever two directions share an eigenvalue.
  double scale = 0.0;
  for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(ed.values(i)));
  if (scale <= 0.0) {
    throw DegenerateError(std::string(scheme) + ": channel product matrix is singular");
  }
  for (int i = 0; i < m; ++i) {
    if (std::abs(ed.values(i)) <= kEigGroupTol * scale) {
      throw DegenerateError(std::string(scheme) + ": channel product matrix is singular");
    }
    for (int j = i + 1; j < m; ++j) {
      if (std::abs(ed.values(i) - ed.values(j)) <= kEigGroupTol * scale) {
        throw InfeasibleError(std::string(scheme) +
                              ": repeated eigenvalue in channel product matrix");
      }
    }
  }

  CognitiveCore core;
  core.m = m;
  core.ch2 = extend(base, 2);

  // v21 column i pairs eigendirection i in slot one with eigendirection
  // i+1 (mod m) in slot two; the cyclic offset keeps the image under the
  // block-diagonal F-inverse linearly independent of v21 itself.
  core.v21 = Matrix::Zero(2 * m, m);
  for (int i = 0; i < m; ++i) {
    core.v21.block(0, i, m, 1) = ed.vectors.col(i);
    core.v21.block(m, i, m, 1) = ed.vectors.col((i + 1) % m);
  }
  normalize_columns(core.v21);

  core.fbar = Matrix::Zero(2 * m, 2 * m);
  core.fbar.topLeftCorner(m, m) = f;
  core.fbar.bottomRightCorner(m, m) = f;

  // Receiver-2 desired-signal certificate: [h21 v21 | h22 v22] has the same
  // column space as [v21 | F^{-1} v21], because v22 = h12^{-1} h11 v21 makes
  // h22^{-1} (h21 v21 | h22 v22) = (h22^{-1} h21) (v21 | F^{-1} v21).
  Matrix cert2(2 * m, 2 * m);
  cert2.leftCols(m) = core.v21;
  cert2.rightCols(m) =
      solve_invertible(core.fbar, core.v21, "channel product matrix", kRankTol);
  check_sigma_ratio(cert2, scheme);

  core.v22 = solve_invertible(core.ch2.h12, core.ch2.h11 * core.v21,
                              "cross link tx2->rx1", kRankTol);
  normalize_columns(core.v22);
  return core;
}

}  // namespace

CognitivePlan cognitive_tx_plan(const ChannelSet& base, RngSeed seed) {
  CognitiveCore core = build_cognitive_core(base, "cognitive transmitter scheme");
  const int m = core.m;
  const ChannelSet& ch2 = core.ch2;

  // w11 needs directions that stay independent after the self-interference
  // subtraction at receiver 1, i.e. [(I - F) v11 | v21] full rank. Among the
  // draws that certify, keep the one with the best moderate-SNR rate growth:
  // the mirrored payload forces one common stream power, so a basis that
  // inflates ||v12|| or crowds the interference space costs rate everywhere.
  Rng rng(seed);
  const Matrix shift = Matrix::Identity(2 * m, 2 * m) - core.fbar;
  Matrix intf1(2 * m, 2 * m);
  intf1 << ch2.h11 * core.v21, ch2.h12 * core.v22;
  Matrix des2(2 * m, 2 * m);
  des2 << ch2.h21 * core.v21, ch2.h22 * core.v22;
  const double s1 = static_cast<double>(2 * m);  // unit-norm beams on tx1

  Matrix v11, v12;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kPrivateBasisDraws; ++attempt) {
    Matrix cand = random_orthonormal(rng, 2 * m, m);
    Matrix cert(2 * m, 2 * m);
    cert.leftCols(m) = shift * cand;
    cert.rightCols(m) = core.v21;
    Eigen::JacobiSVD<Matrix> svd(cert);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > kCertTol * sv(0))) continue;

    Matrix cand12 =
        solve_invertible(ch2.h22, ch2.h21 * cand, "direct link tx2->rx2", kRankTol);
    const double s2 = cand12.squaredNorm() + core.v22.squaredNorm();
    const Matrix cdes1 = ch2.h11 * cand - ch2.h12 * cand12;
    const Matrix cintf2 = ch2.h21 * cand - ch2.h22 * cand12;  // mirror residual
    double score = 0.0;
    for (double rho : {detail::kDesignSnrHigh, detail::kDesignSnrLow}) {
      const double amp = std::sqrt(rho / std::max(s1, s2));
      const double rate = detail::zf_projected_rate(amp * cdes1, intf1) +
                          detail::zf_projected_rate(amp * des2, cintf2);
      score += rho == detail::kDesignSnrHigh ? rate : -rate;
    }
    if (score > best_score) {
      best_score = score;
      v11 = std::move(cand);
      v12 = std::move(cand12);
    }
  }
  if (v11.cols() == 0) {
    throw DegenerateError(
        "cognitive transmitter scheme: no well-conditioned private basis found");
  }

  // Transmitter 2 knows w11 and sends the mirrored payload through v12 with a
  // flipped sign, so h21 v11 x - h22 v12 x vanishes identically at receiver 2.
  // v12 is deliberately left unnormalised: the cancellation is column-exact.
  double mismatch = (ch2.h21 * v11 - ch2.h22 * v12).norm();
  double ref = std::max(1.0, (ch2.h21 * v11).norm());
  if (mismatch > kAlignTol * ref) {
    throw DegenerateError("cognitive transmitter scheme: mirror payload does not cancel");
  }

  check_sigma_ratio(
      [&] {
        Matrix r1(2 * m, 2 * m);
        r1.leftCols(m) = ch2.h11 * v11 - ch2.h12 * v12;
        r1.rightCols(m) = ch2.h11 * core.v21;
        return r1;
      }(),
      "cognitive transmitter scheme (receiver 1)");
  check_sigma_ratio(
      [&] {
        Matrix r2(2 * m, 2 * m);
        r2.leftCols(m) = ch2.h21 * core.v21;
        r2.rightCols(m) = ch2.h22 * core.v22;
        return r2;
      }(),
      "cognitive transmitter scheme (receiver 2)");

  CognitivePlan out;
  out.plan.counts = IntTuple{{m, 0, m, m}};
  out.plan.extension = 2;
  out.plan.v11 = v11;
  out.plan.v12 = v12;
  out.plan.v21 = core.v21;
  out.plan.v22 = core.v22;
  out.plan.rx1 = ReceiverMeta{0, 0, m, m};
  out.plan.rx2 = ReceiverMeta{0, 0, 0, 0};
  out.plan.aligned_rx1 = m;
  out.plan.aligned_rx2 = 0;
  out.linked.push_back(LinkedPayload{MessageId::w11, MessageId::w12, -1});
  return out;
}

CognitivePlan cognitive_rx_plan(const ChannelSet& base, RngSeed seed) {
  CognitiveCore core = build_cognitive_core(base, "cognitive receiver scheme");
  const int m = core.m;
  const ChannelSet& ch2 = core.ch2;

  // Receiver 2 decodes w11 first (it arrives cleanly there) and subtracts it,
  // so w11's only constraint is to stay resolvable at receiver 1 inside the
  // orthogonal complement of the w21 arrival space.
  Matrix arrival21 = ch2.h11 * core.v21;
  Matrix q = orth_complement(arrival21);
  if (q.cols() != m) {
    throw DegenerateError("cognitive receiver scheme: interference space has wrong dimension");
  }

  // Receiver 2's rate does not depend on the private basis (w11 is decoded
  // and subtracted there), so candidates are ranked by receiver 1's
  // moderate-SNR rate growth alone.
  Rng rng(seed);
  Matrix intf1(2 * m, 2 * m);
  intf1 << arrival21, ch2.h12 * core.v22;
  const double s1 = static_cast<double>(2 * m);  // unit-norm beams on tx1
  Matrix v11;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < kPrivateBasisDraws; ++attempt) {
    Matrix cand = random_orthonormal(rng, 2 * m, m);
    Matrix proj = q.adjoint() * (ch2.h11 * cand);
    if (cond_number(proj) > kBasisCondLimit) continue;
    const Matrix cdes1 = ch2.h11 * cand;
    double score = 0.0;
    for (double rho : {detail::kDesignSnrHigh, detail::kDesignSnrLow}) {
      const double rate =
          detail::zf_projected_rate(std::sqrt(rho / s1) * cdes1, intf1);
      score += rho == detail::kDesignSnrHigh ? rate : -rate;
    }
    if (score > best_score) {
      best_score = score;
      v11 = std::move(cand);
    }
  }
  if (v11.cols() == 0) {
    throw DegenerateError(
        "cognitive receiver scheme: no well-conditioned private basis found");
  }

  double scale = std::max(1.0, arrival21.norm());
  if ((q.adjoint() * arrival21).norm() > kAlignTol * scale) {
    throw DegenerateError("cognitive receiver scheme: complement basis is not orthogonal");
  }
  Matrix arrival22 = ch2.h12 * core.v22;
  double scale22 = std::max(1.0, arrival22.norm());
  // v22 = h12^{-1} h11 v21, so its arrival at receiver 1 reoccupies exactly
  // the w21 arrival space and must vanish under the complement projection.
  if ((q.adjoint() * arrival22).norm() > kAlignTol * scale22) {
    throw DegenerateError("cognitive receiver scheme: w22 leaks outside the aligned space");
  }

  check_sigma_ratio(
      [&] {
        Matrix r2(2 * m, 2 * m);
        r2.leftCols(m) = ch2.h21 * core.v21;
        r2.rightCols(m) = ch2.h22 * core.v22;
        return r2;
      }(),
      "cognitive receiver scheme (receiver 2)");

  CognitivePlan out;
  out.plan.counts = IntTuple{{m, 0, m, m}};
  out.plan.extension = 2;
  out.plan.v11 = v11;
  out.plan.v12 = Matrix(2 * m, 0);
  out.plan.v21 = core.v21;
  out.plan.v22 = core.v22;
  out.plan.rx1 = ReceiverMeta{0, 0, m, m};
  out.plan.rx2 = ReceiverMeta{0, 0, 0, 0};
  out.plan.aligned_rx1 = m;
  out.plan.aligned_rx2 = 0;
  out.subtractions.push_back(SubtractionRule{2, MessageId::w11});
  return out;
}

CognitivePlan cognitive_interference_plan(const ChannelSet& base, IcCase kind, RngSeed seed) {
  base.validate();
  if (base.extension != 1) {
    throw UsageError("cognitive interference scheme: channel set must be unextended");
  }
  if (!base.config.square()) {
    throw UsageError("cognitive interference scheme: requires m1 == m2 == n1 == n2");
  }
  const int m = base.config.m1;

  CognitivePlan out;
  out.plan.counts = IntTuple{{m, 0, 0, m}};
  out.plan.extension = 1;
  out.plan.rx1 = ReceiverMeta{0, 0, 0, 0};
  out.plan.rx2 = ReceiverMeta{0, 0, 0, 0};
  out.plan.aligned_rx1 = 0;
  out.plan.aligned_rx2 = 0;
  out.plan.v12 = Matrix(m, 0);
  out.plan.v21 = Matrix(m, 0);

  Rng rng(seed);

  // With a message shared to the other transmitter, both nodes beamform the
  // same payload into the null space of its stacked cross-receiver links,
  // zero-forcing the interference while the direct sum stays full rank.
  auto zero_forced_pair = [&](const Matrix& cross_a, const Matrix& cross_b,
                              const char* which) -> std::pair<Matrix, Matrix> {
    Matrix stacked(m, 2 * m);
    stacked.leftCols(m) = cross_a;
    stacked.rightCols(m) = cross_b;
    if (numerical_rank(stacked, kRankTol) < m) {
      throw DegenerateError(std::string("cognitive interference scheme: stacked ") + which +
                            " links are rank deficient");
    }
    Matrix nul = null_space(stacked, kRankTol);
    if (nul.cols() != m) {
      throw DegenerateError(std::string("cognitive interference scheme: ") + which +
                            " null space has wrong dimension");
    }
    Matrix top = nul.topRows(m);
    Matrix bottom = nul.bottomRows(m);
    double residual = (cross_a * top + cross_b * bottom).norm();
    if (residual > kAlignTol * std::max(1.0, nul.norm())) {
      throw DegenerateError(std::string("cognitive interference scheme: ") + which +
                            " zero-forcing residual too large");
    }
    return {top, bottom};
  };

  switch (kind) {
    case IcCase::both_tx: {
      auto [v11, v12] = zero_forced_pair(base.h21, base.h22, "receiver-2");
      auto [v21, v22] = zero_forced_pair(base.h11, base.h12, "receiver-1");
      out.plan.v11 = v11;
      out.plan.v12 = v12;
      out.plan.v21 = v21;
      out.plan.v22 = v22;
      check_sigma_ratio(base.h11 * v11 + base.h12 * v12,
                        "cognitive interference scheme (receiver 1)");
      check_sigma_ratio(base.h21 * v21 + base.h22 * v22,
                        "cognitive interference scheme (receiver 2)");
      out.linked.push_back(LinkedPayload{MessageId::w11, MessageId::w12, +1});
      out.linked.push_back(LinkedPayload{MessageId::w22, MessageId::w21, +1});
      break;
    }
    case IcCase::both_rx: {
      // Each receiver knows the other user's message and subtracts it; plain
      // well-conditioned bases suffice.
      out.plan.v11 = random_orthonormal(rng, m, m);
      out.plan.v22 = random_orthonormal(rng, m, m);
      check_sigma_ratio(base.h11 * out.plan.v11,
                        "cognitive interference scheme (receiver 1)");
      check_sigma_ratio(base.h22 * out.plan.v22,
                        "cognitive interference scheme (receiver 2)");
      out.subtractions.push_back(SubtractionRule{1, MessageId::w22});
      out.subtractions.push_back(SubtractionRule{2, MessageId::w11});
      break;
    }
    case IcCase::tx_and_rx: {
      // w11 is shared with transmitter 2 (zero-forced at receiver 2); w22 is
      // known at receiver 1 and subtracted there.
      auto [v11, v12] = zero_forced_pair(base.h21, base.h22, "receiver-2");
      out.plan.v11 = v11;
      out.plan.v12 = v12;
      out.plan.v22 = random_orthonormal(rng, m, m);
      check_sigma_ratio(base.h11 * v11 + base.h12 * v12,
                        "cognitive interference scheme (receiver 1)");
      check_sigma_ratio(base.h22 * out.plan.v22,
                        "cognitive interference scheme (receiver 2)");
      out.linked.push_back(LinkedPayload{MessageId::w11, MessageId::w12, +1});
      out.subtractions.push_back(SubtractionRule{1, MessageId::w22});
      break;
    }
  }
  return out;
}

CognitiveChecks verify_cognitive_plan(const ChannelSet& channels, const CognitivePlan& cp) {
  const BeamformingPlan& p = cp.plan;
  ChannelSet local;
  const ChannelSet* ch = &channels;
  if (channels.extension != p.extension) {
    if (channels.extension != 1) {
      throw UsageError("cognitive plan verification: channel extension mismatch");
    }
    local = extend(channels, p.extension);
    ch = &local;
  }

  constexpr std::array<MessageId, 4> all = {MessageId::w11, MessageId::w12, MessageId::w21,
                                            MessageId::w22};

  // Received contribution of a message: its own block (if it carries streams)
  // plus any carrier blocks linked to it.
  auto contribution = [&](int rx, MessageId m) -> Matrix {
    Matrix e(ch->link(rx, 0).rows(), 0);
    if (p.counts[m] > 0) e = ch->link(rx, tx_of(m)) * p.block(m);
    for (const LinkedPayload& lp : cp.linked) {
      if (lp.source != m) continue;
      Matrix add = lp.sign * (ch->link(rx, tx_of(lp.carrier)) * p.block(lp.carrier));
      if (e.cols() == 0) {
        e = std::move(add);
      } else if (add.cols() == e.cols()) {
        e += add;
      } else {
        throw UsageError("cognitive plan verification: carrier stream count mismatch");
      }
    }
    return e;
  };

  auto subtracted = [&](int rx, MessageId m) {
    for (const SubtractionRule& rule : cp.subtractions)
      if (rule.receiver == rx + 1 && rule.cancels == m) return true;
    return false;
  };

  auto floored_rank = [](const Matrix& a, double floor_scale) {
    if (a.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& sv = svd.singularValues();
    const double ref = std::max(sv.size() > 0 ? sv(0) : 0.0, floor_scale);
    int rank = 0;
    if (ref > 0.0)
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > kRankTol * ref) ++rank;
    return rank;
  };

  CognitiveChecks out;
  for (int rx = 0; rx < 2; ++rx) {
    Matrix desired(ch->link(rx, 0).rows(), 0);
    Matrix intf(ch->link(rx, 0).rows(), 0);
    int expected_desired = 0;
    for (MessageId m : all) {
      if (p.counts[m] == 0) continue;
      Matrix e = contribution(rx, m);
      if (rx_of(m) == rx) {
        expected_desired += p.counts[m];
        desired.conservativeResize(Eigen::NoChange, desired.cols() + e.cols());
        desired.rightCols(e.cols()) = e;
      } else if (!subtracted(rx, m)) {
        intf.conservativeResize(Eigen::NoChange, intf.cols() + e.cols());
        intf.rightCols(e.cols()) = e;
      }
    }
    const double scale = std::max(desired.norm(), intf.norm());
    const int d_rank = floored_rank(desired, scale);
    const int i_rank = floored_rank(intf, scale);
    const int expected_intf = (rx == 0) ? p.aligned_rx1 : p.aligned_rx2;
    if (rx == 0) {
      out.rx1_desired_rank = d_rank;
      out.rx1_desired_expected = expected_desired;
      out.rx1_interference_rank = i_rank;
      out.rx1_interference_expected = expected_intf;
    } else {
      out.rx2_desired_rank = d_rank;
      out.rx2_desired_expected = expected_desired;
      out.rx2_interference_rank = i_rank;
      out.rx2_interference_expected = expected_intf;
    }
  }

  out.passed = (out.rx1_desired_rank == out.rx1_desired_expected) +
               (out.rx2_desired_rank == out.rx2_desired_expected) +
               (out.rx1_interference_rank == out.rx1_interference_expected) +
               (out.rx2_interference_rank == out.rx2_interference_expected);

  // Worst residual across exact cancellations (linked payloads seen by the
  // receiver that must not decode the source) and declared aligned pairs.
  double residual = 0.0;
  for (const LinkedPayload& lp : cp.linked) {
    const int cancel_rx = 1 - rx_of(lp.source);
    Matrix leak = contribution(cancel_rx, lp.source);
    double ref = std::max(1.0, (ch->link(cancel_rx, tx_of(lp.source)) *
                                p.block(lp.source)).norm());
    residual = std::max(residual, leak.norm() / ref);
  }
  auto pair_sine = [](Vector u, Vector v) {
    const double nu = u.norm(), nv = v.norm();
    if (nu <= 0.0 || nv <= 0.0) return 1.0;
    u /= nu;
    v /= nv;
    // Orthogonal-component form: stable for near-parallel pairs, unlike
    // sqrt(1 - cos^2) which floors at sqrt(eps).
    return (v - u * u.dot(v)).norm();
  };
  for (int i = 0; i < p.aligned_rx1; ++i) {
    Vector u = ch->link(0, tx_of(MessageId::w21)) * p.v21.col(i);
    Vector v = ch->link(0, tx_of(MessageId::w22)) * p.v22.col(i);
    residual = std::max(residual, pair_sine(u, v));
  }
  for (int i = 0; i < p.aligned_rx2; ++i) {
    Vector u = ch->link(1, tx_of(MessageId::w11)) * p.v11.col(i);
    Vector v = ch->link(1, tx_of(MessageId::w12)) * p.v12.col(i);
    residual = std::max(residual, pair_sine(u, v));
  }
  out.residual = residual;
  return out;
}

Matrix modified_noise_covariance(const Matrix& h12, const Matrix& h22, double tol) {
  if (h12.cols() != h22.cols()) {
    throw UsageError("modified noise covariance: h12 and h22 must agree in column count");
  }
  if (h12.rows() < h12.cols()) {
    throw InfeasibleError(
        "modified noise covariance: needs at least as many receive as transmit antennas");
  }
  Eigen::JacobiSVD<Matrix> svd12(h12);
  double smax12 = svd12.singularValues()(0);
  double smin12 = svd12.singularValues()(svd12.singularValues().size() - 1);
  if (smax12 <= 0.0 || smin12 <= tol * smax12) {
    throw DegenerateError("modified noise covariance: h12 is column rank deficient");
  }
  double alpha = 1.0 / (smax12 * smax12);
  if (h22.size() > 0) {
    Eigen::JacobiSVD<Matrix> svd22(h22);
    double smax22 = svd22.singularValues()(0);
    if (smax22 > 0.0) alpha = std::min(alpha, 1.0 / (smax22 * smax22));
  }

  const Eigen::Index n = h12.rows();
  Matrix gram = h12.adjoint() * h12;
  Matrix projector = h12 * solve_invertible(gram, h12.adjoint(), "h12 Gram matrix", tol);
  Matrix k = Matrix::Identity(n, n) - projector + alpha * (h12 * h12.adjoint());
  return 0.5 * (k + k.adjoint());  // exact Hermitian symmetrisation
}

DofValue dof_value(ChannelKind kind, const SharingPattern& pattern, long long m) {
  if (m < 1) throw UsageError("dof value: antenna count must be positive");

  // Deduplicate identical shares; validate each one.
  std::set<std::pair<int, int>> seen;
  SharingPattern shares;
  for (const Share& s : pattern) {
    int key_to = static_cast<int>(s.to);
    int key_msg = static_cast<int>(s.message);
    if (!seen.insert({key_msg, key_to}).second) continue;
    if (kind == ChannelKind::interference &&
        (s.message == MessageId::w12 || s.message == MessageId::w21)) {
      throw UsageError("dof value: interference channel has no cross messages");
    }
    int tx = tx_of(s.message);
    int rx = rx_of(s.message);
    if ((s.to == Recipient::tx1 && tx == 0) || (s.to == Recipient::tx2 && tx == 1)) {
      throw UsageError("dof value: sharing a message with its own transmitter is a no-op");
    }
    if ((s.to == Recipient::rx1 && rx == 0) || (s.to == Recipient::rx2 && rx == 1)) {
      throw UsageError("dof value: sharing a message with its intended receiver is a no-op");
    }
    shares.push_back(s);
  }

  if (kind == ChannelKind::interference) {
    bool helps_user1 = false;  // w11 shared somewhere useful
    bool helps_user2 = false;  // w22 shared somewhere useful
    for (const Share& s : shares) {
      if (s.message == MessageId::w11) helps_user1 = true;
      if (s.message == MessageId::w22) helps_user2 = true;
    }
    if (helps_user1 && helps_user2) return DofValue{Rational(2 * m), Rational(2 * m), true};
    return DofValue{Rational(m), Rational(m), true};
  }

  // Cross channel.
  if (shares.empty()) {
    if (m == 1) return DofValue{Rational(1), Rational(4, 3), false};
    return DofValue{Rational(4 * m, 3), Rational(4 * m, 3), true};
  }
  if (shares.size() == 1) {
    if (m < 2) {
      throw InfeasibleError(
          "dof value: the cognitive cross-channel scheme needs at least 2 antennas");
    }
    return DofValue{Rational(3 * m, 2), Rational(3 * m, 2), true};
  }
  throw UsageError("dof value: at most one shared message is supported");
}

}  // namespace xalign
