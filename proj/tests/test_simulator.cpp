#include <doctest.h>

#include <cmath>

#include "xalign/simulator.hpp"

using namespace xalign;

namespace {

// Point-to-point layout: two streams from tx1 through an identity h11,
// everything else silent.
std::pair<ChannelSet, BeamformingPlan> point_to_point() {
  ChannelSet ch;
  ch.config = AntennaConfig{2, 1, 2, 1};
  ch.h11 = Matrix::Identity(2, 2);
  ch.h12 = Matrix::Zero(2, 1);
  ch.h21 = Matrix::Zero(1, 2);
  ch.h22 = Matrix::Zero(1, 1);
  BeamformingPlan plan;
  plan.counts = IntTuple{{2, 0, 0, 0}};
  plan.extension = 1;
  plan.v11 = Matrix::Identity(2, 2);
  plan.v12 = Matrix(1, 0);
  plan.v21 = Matrix(2, 0);
  plan.v22 = Matrix(1, 0);
  return {ch, plan};
}

}  // namespace

TEST_SUITE_BEGIN("simulator");

TEST_CASE("known closed form: two clean streams at power rho/2") {
  const auto [ch, plan] = point_to_point();
  const double rho = 3.0;
  const MessageRates r = zf_sum_rate(ch, plan, rho);
  const double want = 2.0 * std::log2(1.0 + rho / 2.0);
  CHECK(r.sum == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.per_message[0] == doctest::Approx(want).epsilon(1e-12));
  CHECK(r.per_message[1] == 0.0);
  CHECK(r.per_message[2] == 0.0);
  CHECK(r.per_message[3] == 0.0);
}

TEST_CASE("input validation: sweep shape and rho sign") {
  const auto [ch, plan] = point_to_point();
  CHECK_THROWS_AS((void)zf_sum_rate(ch, plan, 0.0), UsageError);
  CHECK_THROWS_AS((void)zf_sum_rate(ch, plan, -2.0), UsageError);
  SnrSweep one{{40.0}};
  CHECK_THROWS_AS(one.validate(), UsageError);
  SnrSweep flat{{40.0, 40.0}};
  CHECK_THROWS_AS(flat.validate(), UsageError);
  CHECK_THROWS_AS((void)rate_curve(ch, CognitivePlan{plan, {}, {}}, one), UsageError);
}

TEST_CASE("linked payloads require matching stream counts") {
  auto [ch, plan] = point_to_point();
  ch.h12 = Matrix::Ones(2, 1);
  plan.v12 = Matrix::Ones(1, 1);
  CognitivePlan cp{plan, {LinkedPayload{MessageId::w11, MessageId::w12, 1.0}}, {}};
  CHECK_THROWS_AS((void)zf_sum_rate(ch, cp, 10.0), UsageError);
}

TEST_CASE("aligned square scheme: slope, additivity, monotonicity") {
  const AntennaConfig cfg{3, 3, 3, 3};
  const ChannelSet ch = random_channel_set(cfg, RngSeed{21});
  const IntTuple d{{1, 1, 1, 1}};
  const BeamformingPlan plan = construct_zero_forcing_plan(ch, d, RngSeed{8});

  // Four interference-free streams: adding 10 dB adds 4 * log2(10) bits.
  const double r_hi = zf_sum_rate(ch, plan, 1e6).sum;
  const double r_lo = zf_sum_rate(ch, plan, 1e5).sum;
  CHECK(r_hi - r_lo == doctest::Approx(4.0 * std::log2(10.0)).epsilon(1e-4));

  const SlopeEstimate est = estimate_dof(ch, plan, SnrSweep{{40, 50, 60}});
  CHECK(est.total == doctest::Approx(4.0).epsilon(0.005));
  CHECK(est.fit_residual < 0.01);
  const SlopeEstimate shifted = estimate_dof(ch, plan, SnrSweep{{50, 60, 70}});
  CHECK(std::abs(est.total - shifted.total) < 0.02);

  const RateCurve curve = rate_curve(ch, CognitivePlan{plan, {}, {}}, SnrSweep{{30, 40, 50, 60}});
  for (std::size_t i = 1; i < curve.points.size(); ++i)
    CHECK(curve.points[i].sum > curve.points[i - 1].sum);

  // Per-message rates decompose the receiver-1 joint rate exactly.
  const double rho = 1e5;
  const MessageRates r = zf_sum_rate(ch, plan, rho);
  Matrix intf(3, 2);
  intf << ch.h11 * plan.v21, ch.h12 * plan.v22;
  const Matrix q = orth_complement(intf);
  REQUIRE(q.cols() == 2);
  const double p1 = rho / (plan.v11.squaredNorm() + plan.v21.squaredNorm());
  const double p2 = rho / (plan.v12.squaredNorm() + plan.v22.squaredNorm());
  Matrix g(q.cols(), 2);
  g.col(0) = std::sqrt(p1) * (q.adjoint() * (ch.h11 * plan.v11)).col(0);
  g.col(1) = std::sqrt(p2) * (q.adjoint() * (ch.h12 * plan.v12)).col(0);
  const Matrix a = Matrix::Identity(2, 2) + g.adjoint() * g;
  const double joint = std::log2(std::real(a.determinant()));
  CHECK(r.per_message[0] + r.per_message[1] == doctest::Approx(joint).epsilon(1e-9));
}

TEST_CASE("misaligned baseline loses degrees of freedom") {
  const ChannelSet ch = random_channel_set(AntennaConfig{3, 3, 3, 3}, RngSeed{33});
  const IntTuple d{{1, 1, 1, 1}};
  const BeamformingPlan plan = construct_zero_forcing_plan(ch, d, RngSeed{4});
  const SnrSweep sweep{{40, 50, 60}};
  const double aligned = estimate_dof(ch, plan, sweep).total;
  const double misaligned = misalignment_baseline(ch, d, RngSeed{4}, sweep).total;
  CHECK(aligned > 3.9);
  CHECK(misaligned < 3.0);
  CHECK(misaligned < aligned);
}

TEST_CASE("three-symbol scheme reaches 8/3 per use at m = 2") {
  const ChannelSet base = random_channel_set(AntennaConfig{2, 2, 2, 2}, RngSeed{6});
  const BeamformingPlan plan = construct_three_symbol_plan(base, RngSeed{1});
  const SlopeEstimate est = estimate_dof(extend(base, 3), plan, SnrSweep{{40, 50, 60}});
  CHECK(est.total == doctest::Approx(8.0 / 3.0).epsilon(0.02));
}

TEST_CASE("time-varying scheme reaches 4/3 per use") {
  const ChannelSet ch = per_slot_channel_set(RngSeed{18}, 3);
  const BeamformingPlan plan = construct_time_varying_plan(ch);
  const SlopeEstimate est = estimate_dof(ch, plan, SnrSweep{{40, 50, 60}});
  CHECK(est.total == doctest::Approx(4.0 / 3.0).epsilon(0.03));
}

TEST_CASE("cognitive transmitter scheme reaches 3m/2 per use") {
  const ChannelSet base = random_channel_set(AntennaConfig{2, 2, 2, 2}, RngSeed{29});
  const CognitivePlan cp = cognitive_tx_plan(base, RngSeed{2});
  const SlopeEstimate est = estimate_dof(extend(base, 2), cp, SnrSweep{{40, 50, 60}});
  CHECK(est.total == doctest::Approx(3.0).epsilon(0.02));
}

TEST_SUITE_END();
