#include "xalign/simulator.hpp"

#include <cmath>

namespace xalign {

void SnrSweep::validate() const {
  if (db.size() < 2) throw UsageError("snr sweep needs at least two points");
  for (std::size_t i = 1; i < db.size(); ++i)
    if (!(db[i] > db[i - 1]))
      throw UsageError("snr sweep must be strictly increasing");
}

namespace {

constexpr std::array<MessageId, 4> kMessages = {MessageId::w11, MessageId::w12,
                                                MessageId::w21, MessageId::w22};

// Effective receive matrix of message m at receiver rx: its own block plus
// any carrier blocks linked to it.
Matrix effective_matrix(const ChannelSet& ch, const CognitivePlan& cp, MessageId m,
                        int rx) {
  const BeamformingPlan& p = cp.plan;
  Matrix e = ch.link(rx, tx_of(m)) * p.block(m);
  for (const auto& lp : cp.linked) {
    if (lp.source != m) continue;
    const Matrix& carrier = p.block(lp.carrier);
    if (carrier.cols() != e.cols())
      throw UsageError("linked payload: carrier stream count mismatch");
    e += lp.sign * (ch.link(rx, tx_of(lp.carrier)) * carrier);
  }
  return e;
}

bool subtracted_at(const CognitivePlan& cp, int rx, MessageId m) {
  for (const auto& rule : cp.subtractions)
    if (rule.receiver == rx + 1 && rule.cancels == m) return true;
  return false;
}

// Orthonormal basis of the complement of col(a), with rank decided against
// max(sigma_max(a), floor_scale) so exactly-cancelled interference (all
// singular values ~1e-15) counts as rank zero.
Matrix complement_with_floor(const Matrix& a, double floor_scale, double tol) {
  if (a.cols() == 0) return Matrix::Identity(a.rows(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  const double ref = std::max(sv(0), floor_scale);
  int rank = 0;
  if (ref > 0.0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * ref) ++rank;
  return svd.matrixU().rightCols(a.rows() - rank);
}

}  // namespace

MessageRates zf_sum_rate(const ChannelSet& ch, const CognitivePlan& cp, double rho,
                         double tol) {
  ch.validate();
  if (!(rho > 0)) throw UsageError("rho must be positive");
  const BeamformingPlan& plan = cp.plan;

  // Per-transmitter beamformer energy; with unit columns this is the stream
  // count, carrier blocks add the energy of the mirrored payload.
  const double s_tx1 = plan.v11.squaredNorm() + plan.v21.squaredNorm();
  const double s_tx2 = plan.v12.squaredNorm() + plan.v22.squaredNorm();
  std::array<double, 2> stream_power{0, 0};
  if (cp.linked.empty()) {
    stream_power[0] = s_tx1 > 0 ? rho / s_tx1 : 0;
    stream_power[1] = s_tx2 > 0 ? rho / s_tx2 : 0;
  } else {
    // Linked payloads carry identical symbols at both transmitters, so one
    // common per-stream power keeps the cancellation exact and both
    // transmitters within budget.
    const double p = rho / std::max({s_tx1, s_tx2, 1e-300});
    stream_power = {p, p};
  }

  MessageRates out;
  for (int rx = 0; rx < 2; ++rx) {
    std::vector<MessageId> desired, interference;
    for (MessageId m : kMessages) {
      if (plan.counts[m] == 0) continue;
      if (rx_of(m) == rx)
        desired.push_back(m);
      else if (!subtracted_at(cp, rx, m))
        interference.push_back(m);
    }
    if (desired.empty()) continue;

    std::vector<Matrix> desired_eff;
    double scale = 0.0;
    Eigen::Index icols = 0;
    for (MessageId m : desired) {
      desired_eff.push_back(effective_matrix(ch, cp, m, rx));
      scale = std::max(scale, desired_eff.back().norm());
    }
    Matrix intf(ch.link(rx, 0).rows(), 0);
    for (MessageId m : interference) {
      const Matrix e = effective_matrix(ch, cp, m, rx);
      scale = std::max(scale, e.norm());
      intf.conservativeResize(Eigen::NoChange, icols + e.cols());
      intf.rightCols(e.cols()) = e;
      icols += e.cols();
    }

    const Matrix q = complement_with_floor(intf, scale, tol);

    Eigen::Index total_streams = 0;
    for (const auto& e : desired_eff) total_streams += e.cols();
    Matrix g(q.cols(), total_streams);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < desired.size(); ++i) {
      const double p = stream_power[tx_of(desired[i])];
      g.middleCols(col, desired_eff[i].cols()) =
          std::sqrt(p) * (q.adjoint() * desired_eff[i]);
      col += desired_eff[i].cols();
    }

    if (g.cols() == 0) continue;
    // Chain rule of log det(I + G* G): the Cholesky diagonal splits the joint
    // rate into per-stream terms that sum to it exactly.
    const Matrix a = Matrix::Identity(g.cols(), g.cols()) + g.adjoint() * g;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
      throw DegenerateError("rate computation: Cholesky factorization failed");
    const Matrix l = llt.matrixL();
    col = 0;
    for (std::size_t i = 0; i < desired.size(); ++i) {
      double rate = 0;
      for (Eigen::Index k = 0; k < desired_eff[i].cols(); ++k)
        rate += 2.0 * std::log2(std::real(l(col + k, col + k)));
      out.per_message[static_cast<int>(desired[i])] = rate;
      col += desired_eff[i].cols();
    }
  }

  for (double r : out.per_message) out.sum += r;
  out.sum /= plan.extension;
  for (auto& r : out.per_message) r /= plan.extension;
  return out;
}

MessageRates zf_sum_rate(const ChannelSet& ch, const BeamformingPlan& plan, double rho,
                         double tol) {
  return zf_sum_rate(ch, CognitivePlan{plan, {}, {}}, rho, tol);
}

RateCurve rate_curve(const ChannelSet& ch, const CognitivePlan& plan,
                     const SnrSweep& sweep, double tol) {
  sweep.validate();
  RateCurve curve;
  for (double db : sweep.db) {
    const double rho = std::pow(10.0, db / 10.0);
    const MessageRates r = zf_sum_rate(ch, plan, rho, tol);
    curve.points.push_back(RatePoint{db, r.sum, r.per_message});
  }
  return curve;
}

namespace {

SlopeEstimate fit_slopes(const RateCurve& curve, const SnrSweep& sweep) {
  const std::size_t n = curve.points.size();
  std::vector<double> x(n);
  double x_mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log2(std::pow(10.0, sweep.db[i] / 10.0));
    x_mean += x[i];
  }
  x_mean /= static_cast<double>(n);
  double var = 0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - x_mean) * (x[i] - x_mean);

  auto slope_of = [&](auto&& value) {
    double y_mean = 0;
    for (std::size_t i = 0; i < n; ++i) y_mean += value(i);
    y_mean /= static_cast<double>(n);
    double cov = 0;
    for (std::size_t i = 0; i < n; ++i) cov += (x[i] - x_mean) * (value(i) - y_mean);
    return std::pair<double, double>(cov / var, y_mean);
  };

  SlopeEstimate est;
  const auto [slope, y_mean] =
      slope_of([&](std::size_t i) { return curve.points[i].sum; });
  est.total = slope;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = y_mean + slope * (x[i] - x_mean);
    const double resid = curve.points[i].sum - pred;
    ss += resid * resid;
  }
  est.fit_residual = std::sqrt(ss / static_cast<double>(n));
  for (int m = 0; m < 4; ++m)
    est.per_message[m] =
        slope_of([&](std::size_t i) { return curve.points[i].per_message[m]; }).first;
  return est;
}

}  // namespace

SlopeEstimate estimate_dof(const ChannelSet& ch, const CognitivePlan& plan,
                           const SnrSweep& sweep, double tol) {
  return fit_slopes(rate_curve(ch, plan, sweep, tol), sweep);
}

SlopeEstimate estimate_dof(const ChannelSet& ch, const BeamformingPlan& plan,
                           const SnrSweep& sweep, double tol) {
  return estimate_dof(ch, CognitivePlan{plan, {}, {}}, sweep, tol);
}

SlopeEstimate misalignment_baseline(const ChannelSet& ch, const IntTuple& d,
                                    RngSeed seed, const SnrSweep& sweep) {
  const BeamformingPlan plan = construct_misaligned_plan(ch, d, seed);
  return estimate_dof(ch, plan, sweep);
}

}  // namespace xalign
