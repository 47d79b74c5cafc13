#include <doctest.h>

#include "xalign/cognitive.hpp"

using namespace xalign;

namespace {

ChannelSet identity_channels(int m) {
  ChannelSet ch;
  ch.config = AntennaConfig{m, m, m, m};
  ch.h11 = Matrix::Identity(m, m);
  ch.h12 = Matrix::Identity(m, m);
  ch.h21 = Matrix::Identity(m, m);
  ch.h22 = Matrix::Identity(m, m);
  return ch;
}

Share share(MessageId msg, Recipient to) { return Share{msg, to}; }

}  // namespace

TEST_SUITE_BEGIN("cognitive");

TEST_CASE("dof_value: interference channel cases") {
  {
    const DofValue v = dof_value(ChannelKind::interference, {}, 3);
    CHECK(v.exact);
    CHECK(v.lower == Rational(3));
    CHECK(v.upper == Rational(3));
  }
  // One side helped: no gain over the unshared value.
  {
    const DofValue v = dof_value(ChannelKind::interference,
                                 {share(MessageId::w11, Recipient::tx2)}, 2);
    CHECK(v.lower == Rational(2));
    CHECK(v.exact);
  }
  // Both messages shared usefully, any mix of recipients: interference-free.
  {
    const DofValue v = dof_value(
        ChannelKind::interference,
        {share(MessageId::w11, Recipient::rx2), share(MessageId::w22, Recipient::tx1)}, 2);
    CHECK(v.lower == Rational(4));
    CHECK(v.upper == Rational(4));
  }
  {
    const DofValue v = dof_value(
        ChannelKind::interference,
        {share(MessageId::w11, Recipient::tx2), share(MessageId::w22, Recipient::rx1)}, 1);
    CHECK(v.lower == Rational(2));
  }
  CHECK_THROWS_AS((void)dof_value(ChannelKind::interference,
                                  {share(MessageId::w12, Recipient::tx1)}, 2),
                  UsageError);
}

TEST_CASE("dof_value: cross-channel cases") {
  // Single antenna, nothing shared: only the interval [1, 4/3) is certain.
  {
    const DofValue v = dof_value(ChannelKind::x_channel, {}, 1);
    CHECK_FALSE(v.exact);
    CHECK(v.lower == Rational(1));
    CHECK(v.upper == Rational(4, 3));
  }
  {
    const DofValue v = dof_value(ChannelKind::x_channel, {}, 2);
    CHECK(v.exact);
    CHECK(v.lower == Rational(8, 3));
  }
  {
    const DofValue v = dof_value(ChannelKind::x_channel, {}, 3);
    CHECK(v.lower == Rational(4));
  }
  // One shared message lifts the total to 3m/2.
  {
    const DofValue v = dof_value(ChannelKind::x_channel,
                                 {share(MessageId::w11, Recipient::tx2)}, 2);
    CHECK(v.exact);
    CHECK(v.lower == Rational(3));
  }
  {
    const DofValue v = dof_value(ChannelKind::x_channel,
                                 {share(MessageId::w21, Recipient::rx1)}, 4);
    CHECK(v.lower == Rational(6));
  }
  // Duplicate shares collapse to one.
  {
    const DofValue v = dof_value(ChannelKind::x_channel,
                                 {share(MessageId::w11, Recipient::tx2),
                                  share(MessageId::w11, Recipient::tx2)},
                                 2);
    CHECK(v.lower == Rational(3));
  }
  CHECK_THROWS_AS((void)dof_value(ChannelKind::x_channel,
                                  {share(MessageId::w11, Recipient::rx2)}, 1),
                  InfeasibleError);
  CHECK_THROWS_AS((void)dof_value(ChannelKind::x_channel,
                                  {share(MessageId::w11, Recipient::tx2),
                                   share(MessageId::w21, Recipient::rx1)},
                                  2),
                  UsageError);
}

TEST_CASE("dof_value: no-op shares and bad inputs are rejected") {
  CHECK_THROWS_AS(
      (void)dof_value(ChannelKind::x_channel, {share(MessageId::w11, Recipient::tx1)}, 2),
      UsageError);
  CHECK_THROWS_AS(
      (void)dof_value(ChannelKind::x_channel, {share(MessageId::w11, Recipient::rx1)}, 2),
      UsageError);
  CHECK_THROWS_AS(
      (void)dof_value(ChannelKind::interference, {share(MessageId::w22, Recipient::tx2)}, 2),
      UsageError);
  CHECK_THROWS_AS(
      (void)dof_value(ChannelKind::interference, {share(MessageId::w22, Recipient::rx2)}, 2),
      UsageError);
  CHECK_THROWS_AS((void)dof_value(ChannelKind::x_channel, {}, 0), UsageError);
}

TEST_CASE("dof_value hierarchy: sharing never hurts") {
  for (long long m = 2; m <= 5; ++m) {
    const Rational unshared = dof_value(ChannelKind::x_channel, {}, m).lower;
    const Rational one_share =
        dof_value(ChannelKind::x_channel, {share(MessageId::w11, Recipient::tx2)}, m).lower;
    const Rational ic_both = dof_value(
        ChannelKind::interference,
        {share(MessageId::w11, Recipient::tx2), share(MessageId::w22, Recipient::tx1)}, m)
        .lower;
    CHECK(unshared <= one_share);
    CHECK(one_share <= ic_both);
  }
}

TEST_CASE("cognitive transmitter scheme: structure and certification") {
  for (int m = 2; m <= 4; ++m) {
    CAPTURE(m);
    const ChannelSet base =
        random_channel_set(AntennaConfig{m, m, m, m}, RngSeed{static_cast<std::uint64_t>(40 + m)});
    const CognitivePlan cp = cognitive_tx_plan(base, RngSeed{9});
    CHECK(cp.plan.counts.d == std::array<int, 4>{{m, 0, m, m}});
    CHECK(cp.plan.extension == 2);
    REQUIRE(cp.linked.size() == 1);
    CHECK(cp.linked[0].source == MessageId::w11);
    CHECK(cp.linked[0].carrier == MessageId::w12);
    CHECK(cp.linked[0].sign == -1.0);
    CHECK(cp.subtractions.empty());
    CHECK(cp.plan.v11.rows() == 2 * m);
    CHECK(cp.plan.v12.cols() == m);  // carrier block mirrors the w11 payload

    const CognitiveChecks checks = verify_cognitive_plan(base, cp);
    CHECK(checks.ok());
    CHECK(checks.rx1_desired_rank == m);
    CHECK(checks.rx1_interference_rank == m);
    CHECK(checks.rx2_desired_rank == 2 * m);
    CHECK(checks.rx2_interference_rank == 0);
    CHECK(checks.residual <= kAlignTol);

    // Pre-extended channels certify identically.
    const CognitiveChecks again = verify_cognitive_plan(extend(base, 2), cp);
    CHECK(again.ok());
  }
}

TEST_CASE("cognitive receiver scheme: structure and certification") {
  for (int m = 2; m <= 4; ++m) {
    CAPTURE(m);
    const ChannelSet base =
        random_channel_set(AntennaConfig{m, m, m, m}, RngSeed{static_cast<std::uint64_t>(60 + m)});
    const CognitivePlan cp = cognitive_rx_plan(base, RngSeed{11});
    CHECK(cp.plan.counts.d == std::array<int, 4>{{m, 0, m, m}});
    CHECK(cp.plan.extension == 2);
    CHECK(cp.linked.empty());
    REQUIRE(cp.subtractions.size() == 1);
    CHECK(cp.subtractions[0].receiver == 2);
    CHECK(cp.subtractions[0].cancels == MessageId::w11);
    CHECK(cp.plan.v12.cols() == 0);

    const CognitiveChecks checks = verify_cognitive_plan(base, cp);
    CHECK(checks.ok());
    CHECK(checks.rx1_interference_rank == m);   // w21/w22 aligned into m dims
    CHECK(checks.rx2_interference_rank == 0);   // w11 subtracted away
    CHECK(checks.rx2_desired_rank == 2 * m);
  }
}

TEST_CASE("cognitive cross-channel schemes are deterministic and reject bad inputs") {
  const ChannelSet base = random_channel_set(AntennaConfig{3, 3, 3, 3}, RngSeed{77});
  const CognitivePlan a = cognitive_tx_plan(base, RngSeed{5});
  const CognitivePlan b = cognitive_tx_plan(base, RngSeed{5});
  CHECK((a.plan.v11 - b.plan.v11).norm() == 0.0);
  CHECK((a.plan.v12 - b.plan.v12).norm() == 0.0);

  const ChannelSet tiny = random_channel_set(AntennaConfig{1, 1, 1, 1}, RngSeed{3});
  CHECK_THROWS_AS((void)cognitive_tx_plan(tiny, RngSeed{1}), InfeasibleError);
  CHECK_THROWS_AS((void)cognitive_rx_plan(tiny, RngSeed{1}), InfeasibleError);

  // Identity links give a product matrix with a single repeated eigenvalue.
  try {
    (void)cognitive_tx_plan(identity_channels(2), RngSeed{1});
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("repeated eigenvalue") != std::string::npos);
  }
}

TEST_CASE("cognitive interference schemes: all three placements certify") {
  for (int m = 1; m <= 3; ++m) {
    CAPTURE(m);
    const ChannelSet base =
        random_channel_set(AntennaConfig{m, m, m, m}, RngSeed{static_cast<std::uint64_t>(80 + m)});
    for (IcCase which : {IcCase::both_tx, IcCase::both_rx, IcCase::tx_and_rx}) {
      const CognitivePlan cp = cognitive_interference_plan(base, which, RngSeed{13});
      CHECK(cp.plan.counts.d == std::array<int, 4>{{m, 0, 0, m}});
      CHECK(cp.plan.extension == 1);
      const CognitiveChecks checks = verify_cognitive_plan(base, cp);
      CHECK(checks.ok());
      CHECK(checks.rx1_desired_rank == m);
      CHECK(checks.rx2_desired_rank == m);
      CHECK(checks.rx1_interference_rank == 0);
      CHECK(checks.rx2_interference_rank == 0);
    }

    const CognitivePlan both_tx = cognitive_interference_plan(base, IcCase::both_tx, RngSeed{13});
    CHECK(both_tx.linked.size() == 2);
    CHECK(both_tx.subtractions.empty());
    const CognitivePlan both_rx = cognitive_interference_plan(base, IcCase::both_rx, RngSeed{13});
    CHECK(both_rx.linked.empty());
    CHECK(both_rx.subtractions.size() == 2);
    const CognitivePlan mixed = cognitive_interference_plan(base, IcCase::tx_and_rx, RngSeed{13});
    CHECK(mixed.linked.size() == 1);
    CHECK(mixed.subtractions.size() == 1);
  }
}

TEST_CASE("modified noise covariance: Hermitian with spectrum in (0, 1]") {
  Rng rng(RngSeed{314});
  for (int trial = 0; trial < 20; ++trial) {
    const int m2 = 1 + static_cast<int>(rng.next_u64() % 4);
    const int n1 = m2 + static_cast<int>(rng.next_u64() % 3);
    const int n2 = 1 + static_cast<int>(rng.next_u64() % 4);
    const Matrix h12 = rng.gaussian_matrix(n1, m2);
    const Matrix h22 = rng.gaussian_matrix(n2, m2);
    const Matrix k = modified_noise_covariance(h12, h22);
    REQUIRE(k.rows() == n1);
    REQUIRE(k.cols() == n1);
    CHECK((k - k.adjoint()).norm() <= 1e-12 * std::max(1.0, k.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(k);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      CHECK(es.eigenvalues()(i) > 0.0);
      CHECK(es.eigenvalues()(i) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("modified noise covariance: input validation") {
  Rng rng(RngSeed{11});
  CHECK_THROWS_AS((void)modified_noise_covariance(rng.gaussian_matrix(3, 2),
                                                  rng.gaussian_matrix(2, 3)),
                  UsageError);
  CHECK_THROWS_AS((void)modified_noise_covariance(rng.gaussian_matrix(2, 3),
                                                  rng.gaussian_matrix(2, 3)),
                  InfeasibleError);
  Matrix low = rng.gaussian_matrix(3, 2);
  low.col(1) = 2.0 * low.col(0);
  CHECK_THROWS_AS((void)modified_noise_covariance(low, rng.gaussian_matrix(2, 2)),
                  DegenerateError);
}

TEST_SUITE_END();
