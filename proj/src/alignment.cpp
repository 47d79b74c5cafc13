#include "xalign/alignment.hpp"

#include "plan_score.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

namespace xalign {

namespace {

int pos_part(int x) { return x > 0 ? x : 0; }

}  // namespace

CountMeta count_interference_dims(const AntennaConfig& config, const IntTuple& d,
                                  int receiver) {
  config.validate();
  if (receiver != 1 && receiver != 2)
    throw UsageError("count_interference_dims: receiver must be 1 or 2");
  for (int v : d.d)
    if (v < 0) throw UsageError("stream counts must be >= 0");

  // Interference at receiver 1 comes from the streams bound for receiver 2
  // (d21 from tx1, d22 from tx2) against budget n1; mirrored for receiver 2.
  const int n = receiver == 1 ? config.n1 : config.n2;
  const int a = receiver == 1 ? d[MessageId::w21] : d[MessageId::w11];
  const int b = receiver == 1 ? d[MessageId::w22] : d[MessageId::w12];

  CountMeta m;
  m.r1 = pos_part(config.m1 - n);
  m.r2 = pos_part(config.m2 - n);
  m.r = pos_part(config.m1 + config.m2 - n) - m.r1 - m.r2;
  m.r0 = std::min({pos_part(a - m.r1), pos_part(b - m.r2), m.r});
  m.dims = pos_part(a - m.r1) + pos_part(b - m.r2) - m.r0;
  return m;
}

bool feasible_by_counting(const AntennaConfig& config, const IntTuple& d) {
  const CountMeta c1 = count_interference_dims(config, d, 1);
  const CountMeta c2 = count_interference_dims(config, d, 2);
  if (config.n1 < d[MessageId::w11] + d[MessageId::w12] + c1.dims) return false;
  if (config.n2 < d[MessageId::w21] + d[MessageId::w22] + c2.dims) return false;
  if (config.m1 < d[MessageId::w11] + d[MessageId::w21]) return false;
  if (config.m2 < d[MessageId::w12] + d[MessageId::w22]) return false;
  return true;
}

namespace {

// Structured directions steered against one receiver: null-space columns
// first, then the tops/bottoms of shared null vectors of the stacked link.
struct SteeredSide {
  Matrix a_cols;  // columns for the tx1-side interfering block
  Matrix b_cols;  // columns for the tx2-side interfering block
  int pairs = 0;  // aligned pairs among them (last `pairs` columns of each)
  int a_null = 0;
  int b_null = 0;
};

SteeredSide steer_against_receiver(const Matrix& ha, const Matrix& hb, int a_streams,
                                   int b_streams, const CountMeta& meta,
                                   bool align_pairs, double tol) {
  const int n = static_cast<int>(ha.rows());
  const int ma = static_cast<int>(ha.cols());
  const int mb = static_cast<int>(hb.cols());

  if (numerical_rank(ha, tol) != std::min(n, ma) ||
      numerical_rank(hb, tol) != std::min(n, mb))
    throw DegenerateError("zero-forcing plan: channel link is rank deficient");

  const Matrix null_a = null_space(ha, tol);
  const Matrix null_b = null_space(hb, tol);
  if (null_a.cols() != meta.r1 || null_b.cols() != meta.r2)
    throw DegenerateError("zero-forcing plan: unexpected null-space dimension");

  SteeredSide side;
  side.a_null = std::min(a_streams, meta.r1);
  side.b_null = std::min(b_streams, meta.r2);
  side.pairs = align_pairs ? meta.r0 : 0;

  side.a_cols = Matrix(ma, side.a_null + side.pairs);
  side.b_cols = Matrix(mb, side.b_null + side.pairs);
  side.a_cols.leftCols(side.a_null) = null_a.leftCols(side.a_null);
  side.b_cols.leftCols(side.b_null) = null_b.leftCols(side.b_null);

  if (side.pairs > 0) {
    Matrix stacked(n, ma + mb);
    stacked << ha, hb;
    const Matrix kernel = null_space(stacked, tol);
    // Remove the single-link null directions; what is left are the vectors
    // whose top and bottom halves are both active and align at the receiver.
    Matrix single = Matrix::Zero(ma + mb, meta.r1 + meta.r2);
    single.block(0, 0, ma, meta.r1) = null_a;
    single.block(ma, meta.r1, mb, meta.r2) = null_b;
    Matrix mixed = kernel;
    if (single.cols() > 0) mixed -= single * (single.adjoint() * kernel);
    const Matrix pairs_basis = orth_basis(mixed, tol);
    if (pairs_basis.cols() < side.pairs)
      throw DegenerateError("zero-forcing plan: shared null space too small");
    for (int i = 0; i < side.pairs; ++i) {
      const Vector q = pairs_basis.col(i);
      const Vector top = q.head(ma);
      const Vector bot = q.tail(mb);
      const double tn = top.norm(), bn = bot.norm();
      if (tn < 1e-9 || bn < 1e-9)
        throw DegenerateError("zero-forcing plan: degenerate shared null vector");
      side.a_cols.col(side.a_null + i) = top / tn;
      side.b_cols.col(side.b_null + i) = bot / bn;
    }
  }
  return side;
}

// Appends `count` random unit columns to `block`, each orthonormalized
// against `basis` (which grows with every accepted column).
void append_random_columns(Rng& rng, Matrix& block, Matrix& basis, int count) {
  const Eigen::Index rows = block.rows();
  for (int k = 0; k < count; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < 16 && !placed; ++attempt) {
      Vector g = rng.gaussian_matrix(rows, 1);
      if (basis.cols() > 0) {
        g -= basis * (basis.adjoint() * g);
        g -= basis * (basis.adjoint() * g);  // second pass for hygiene
      }
      const double nrm = g.norm();
      if (nrm > 1e-8) {
        g /= nrm;
        block.conservativeResize(Eigen::NoChange, block.cols() + 1);
        block.col(block.cols() - 1) = g;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = g;
        placed = true;
      }
    }
    if (!placed)
      throw DegenerateError("zero-forcing plan: transmitter space exhausted");
  }
}

BeamformingPlan construct_plan_impl(const ChannelSet& channels, const IntTuple& d,
                                    RngSeed seed, bool align_pairs) {
  channels.validate();
  if (channels.extension != 1)
    throw UsageError("zero-forcing plan: expects an unextended channel set");
  for (int v : d.d)
    if (v < 0) throw UsageError("stream counts must be >= 0");

  const AntennaConfig& cfg = channels.config;
  const CountMeta c1 = count_interference_dims(cfg, d, 1);
  const CountMeta c2 = count_interference_dims(cfg, d, 2);
  if (cfg.n1 < d[MessageId::w11] + d[MessageId::w12] + c1.dims)
    throw InfeasibleError(
        "infeasible assignment: receiver 1 budget n1 < d11 + d12 + residual "
        "interference");
  if (cfg.n2 < d[MessageId::w21] + d[MessageId::w22] + c2.dims)
    throw InfeasibleError(
        "infeasible assignment: receiver 2 budget n2 < d21 + d22 + residual "
        "interference");
  if (cfg.m1 < d[MessageId::w11] + d[MessageId::w21])
    throw InfeasibleError("infeasible assignment: transmitter 1 budget m1 < d11 + d21");
  if (cfg.m2 < d[MessageId::w12] + d[MessageId::w22])
    throw InfeasibleError("infeasible assignment: transmitter 2 budget m2 < d12 + d22");

  const double tol = kRankTol;
  // Directions for the receiver-2 messages are steered against receiver 1,
  // and vice versa. The two sides use disjoint channel pairs, so their
  // structured columns are generically independent per transmitter.
  const SteeredSide rx1_side = steer_against_receiver(
      channels.h11, channels.h12, d[MessageId::w21], d[MessageId::w22], c1,
      align_pairs, tol);
  const SteeredSide rx2_side = steer_against_receiver(
      channels.h21, channels.h22, d[MessageId::w11], d[MessageId::w12], c2,
      align_pairs, tol);

  BeamformingPlan plan;
  plan.counts = d;
  plan.extension = 1;
  plan.rx1 = ReceiverMeta{c1.r1, c1.r2, c1.r, align_pairs ? c1.r0 : 0};
  plan.rx2 = ReceiverMeta{c2.r1, c2.r2, c2.r, align_pairs ? c2.r0 : 0};
  plan.aligned_rx1 = rx1_side.pairs;
  plan.aligned_rx2 = rx2_side.pairs;

  plan.v11 = rx2_side.a_cols;
  plan.v12 = rx2_side.b_cols;
  plan.v21 = rx1_side.a_cols;
  plan.v22 = rx1_side.b_cols;

  Rng rng(seed);
  // Fixed fill order keeps plans reproducible: tx1 (v11 then v21), tx2.
  {
    Matrix combined(cfg.m1, plan.v11.cols() + plan.v21.cols());
    combined << plan.v11, plan.v21;
    Matrix basis = orth_basis(combined, tol);
    append_random_columns(rng, plan.v11, basis, d[MessageId::w11] -
                                                    static_cast<int>(plan.v11.cols()));
    append_random_columns(rng, plan.v21, basis, d[MessageId::w21] -
                                                    static_cast<int>(plan.v21.cols()));
  }
  {
    Matrix combined(cfg.m2, plan.v12.cols() + plan.v22.cols());
    combined << plan.v12, plan.v22;
    Matrix basis = orth_basis(combined, tol);
    append_random_columns(rng, plan.v12, basis, d[MessageId::w12] -
                                                    static_cast<int>(plan.v12.cols()));
    append_random_columns(rng, plan.v22, basis, d[MessageId::w22] -
                                                    static_cast<int>(plan.v22.cols()));
  }

  Matrix tx1(cfg.m1, plan.v11.cols() + plan.v21.cols());
  tx1 << plan.v11, plan.v21;
  Matrix tx2(cfg.m2, plan.v12.cols() + plan.v22.cols());
  tx2 << plan.v12, plan.v22;
  if (numerical_rank(tx1, tol) != d[MessageId::w11] + d[MessageId::w21] ||
      numerical_rank(tx2, tol) != d[MessageId::w12] + d[MessageId::w22])
    throw DegenerateError("zero-forcing plan: transmit columns lost independence");

  return plan;
}

}  // namespace

BeamformingPlan construct_zero_forcing_plan(const ChannelSet& channels,
                                            const IntTuple& d, RngSeed seed) {
  return construct_plan_impl(channels, d, seed, /*align_pairs=*/true);
}

BeamformingPlan construct_misaligned_plan(const ChannelSet& channels,
                                          const IntTuple& d, RngSeed seed) {
  return construct_plan_impl(channels, d, seed, /*align_pairs=*/false);
}

namespace {

// Rank decisions inside diagnostics use the joint received scale as a floor
// so that an exactly-cancelled block (all singular values ~1e-15) reads as
// rank zero instead of tripping the purely relative threshold.
int rank_with_floor(const Matrix& a, double floor_scale, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double ref = std::max(sv(0), floor_scale);
  if (!(ref > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * ref) ++rank;
  return rank;
}

double pair_residual(const Matrix& ha, const Vector& va, const Matrix& hb,
                     const Vector& vb) {
  Vector u = ha * va;
  Vector w = hb * vb;
  const double un = u.norm(), wn = w.norm();
  if (un < 1e-14 || wn < 1e-14) return 1.0;
  u /= un;
  w /= wn;
  // Norm of the component of w orthogonal to u: the sine of the principal
  // angle, computed without the sqrt(eps) floor of the 1 - cos^2 form.
  const Complex c = (u.adjoint() * w)(0, 0);
  return (w - u * c).norm();
}

ReceiverDiag diagnose_receiver(const Matrix& ha, const Matrix& hb,
                               const Matrix& desired_a, const Matrix& desired_b,
                               const Matrix& intf_a, const Matrix& intf_b,
                               const ReceiverMeta& meta, int declared_pairs,
                               int a_streams, int b_streams, double tol) {
  Matrix desired(ha.rows(), desired_a.cols() + desired_b.cols());
  desired << ha * desired_a, hb * desired_b;
  Matrix interference(ha.rows(), intf_a.cols() + intf_b.cols());
  interference << ha * intf_a, hb * intf_b;
  Matrix joint(ha.rows(), desired.cols() + interference.cols());
  joint << desired, interference;

  double scale = 0.0;
  if (joint.cols() > 0) {
    Eigen::JacobiSVD<Matrix> svd(joint);
    scale = svd.singularValues()(0);
    // When every arrival is cancelled (no desired streams, all interference
    // nulled), the joint scale collapses to noise level and a purely relative
    // test would resurrect that noise as rank. Beam columns are unit norm, so
    // the link gain bounds what could arrive; floor the reference with it.
    Matrix links(ha.rows(), ha.cols() + hb.cols());
    links << ha, hb;
    Eigen::JacobiSVD<Matrix> lsvd(links);
    scale = std::max(scale, lsvd.singularValues()(0));
  }

  ReceiverDiag diag;
  diag.interference_rank = rank_with_floor(interference, scale, tol);
  diag.desired_rank = rank_with_floor(desired, scale, tol);
  diag.joint_rank = rank_with_floor(joint, scale, tol);

  const int ta = std::min(a_streams, meta.r1);
  const int tb = std::min(b_streams, meta.r2);
  for (int i = 0; i < declared_pairs; ++i) {
    if (ta + i >= intf_a.cols() || tb + i >= intf_b.cols()) break;
    diag.residual = std::max(
        diag.residual, pair_residual(ha, intf_a.col(ta + i), hb, intf_b.col(tb + i)));
  }
  return diag;
}

}  // namespace

AlignmentDiagnostics diagnose(const ChannelSet& channels, const BeamformingPlan& plan,
                              double tol) {
  channels.validate();
  AlignmentDiagnostics out;
  out.rx1 = diagnose_receiver(channels.h11, channels.h12, plan.v11, plan.v12,
                              plan.v21, plan.v22, plan.rx1, plan.aligned_rx1,
                              plan.counts[MessageId::w21],
                              plan.counts[MessageId::w22], tol);
  out.rx2 = diagnose_receiver(channels.h21, channels.h22, plan.v21, plan.v22,
                              plan.v11, plan.v12, plan.rx2, plan.aligned_rx2,
                              plan.counts[MessageId::w11],
                              plan.counts[MessageId::w12], tol);
  return out;
}

Matrix product_matrix_f(const ChannelSet& channels, double tol) {
  channels.validate();
  const Matrix& h11 = channels.h11;
  const Matrix& h12 = channels.h12;
  const Matrix& h21 = channels.h21;
  const Matrix& h22 = channels.h22;
  if (h11.rows() != h11.cols() || h12.rows() != h12.cols() ||
      h21.rows() != h21.cols() || h22.rows() != h22.cols() ||
      h11.rows() != h12.rows() || h11.rows() != h21.rows() ||
      h11.rows() != h22.rows())
    throw UsageError("product matrix requires square links of equal size");
  const Matrix a = solve_invertible(h11, h12, "product matrix: h11", tol);
  const Matrix b = solve_invertible(h22, h21, "product matrix: h22", tol);
  return a * b;
}

std::vector<std::array<int, 3>> group_eigenvalues(const std::vector<Complex>& values,
                                                  int m, double equality_tol) {
  if (m < 1) throw UsageError("group_eigenvalues: m must be >= 1");
  const int n = static_cast<int>(values.size());
  if (n != 3 * m) throw UsageError("group_eigenvalues: need exactly 3m values");

  double scale = 0.0;
  for (const auto& v : values) scale = std::max(scale, std::abs(v));

  // Equivalence classes by transitive closure of |vi - vj| <= tol * scale.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= equality_tol * scale) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
      }

  std::vector<std::vector<int>> classes;
  {
    std::vector<int> root_to_class(n, -1);
    for (int i = 0; i < n; ++i) {
      const int r = find(i);
      if (root_to_class[r] < 0) {
        root_to_class[r] = static_cast<int>(classes.size());
        classes.emplace_back();
      }
      classes[root_to_class[r]].push_back(i);
    }
  }
  for (const auto& cls : classes)
    if (static_cast<int>(cls.size()) > 2 * m)
      throw InfeasibleError(
          "group_eigenvalues: a value repeats more than 2m times; no valid "
          "triple grouping exists");

  const int num_classes = static_cast<int>(classes.size());

  // Quality of a candidate triple: the worse sigma_min/sigma_max over the two
  // receiver-side 3x3 pattern blocks it contributes. The first block degrades
  // as the leader value approaches the first follower's, the second as their
  // inverses approach for the second follower; column normalization makes the
  // score scale-invariant. Singular or non-finite values score zero.
  auto triple_score = [](const Complex& la, const Complex& lb, const Complex& lc) {
    auto block_ratio = [](Matrix blk) {
      for (Eigen::Index j = 0; j < blk.cols(); ++j) {
        const double nrm = blk.col(j).norm();
        if (!(nrm > 0.0) || !std::isfinite(nrm)) return 0.0;
        blk.col(j) /= nrm;
      }
      Eigen::JacobiSVD<Matrix> svd(blk);
      const double ratio = svd.singularValues()(2) / svd.singularValues()(0);
      return std::isfinite(ratio) ? ratio : 0.0;
    };
    Matrix a1(3, 3);
    a1 << Complex(1), la, Complex(1),  //
        Complex(1), lb, Complex(0),    //
        Complex(0), Complex(0), Complex(1);
    double score = block_ratio(a1);
    if (std::abs(la) > 0.0 && std::abs(lc) > 0.0) {
      Matrix a2(3, 3);
      a2 << Complex(1), 1.0 / la, Complex(1),  //
          Complex(0), Complex(0), Complex(1),  //
          Complex(1), 1.0 / lc, Complex(0);
      score = std::min(score, block_ratio(a2));
    } else {
      score = 0.0;
    }
    return score;
  };

  // Candidate triple types over classes: a leader class with two follower
  // classes drawn from the others (both followers may share a class).
  // Enumeration order fixes determinism.
  struct TripleType {
    int a, b, c;
    double score;
  };
  std::vector<TripleType> types;
  for (int a = 0; a < num_classes; ++a)
    for (int b = 0; b < num_classes; ++b) {
      if (b == a) continue;
      for (int c = 0; c < num_classes; ++c) {
        if (c == a) continue;
        types.push_back({a, b, c,
                         triple_score(values[classes[a][0]], values[classes[b][0]],
                                      values[classes[c][0]])});
      }
    }
  std::vector<std::vector<int>> touching(num_classes);
  for (int t = 0; t < static_cast<int>(types.size()); ++t)
    for (int cls : {types[t].a, types[t].b, types[t].c})
      if (touching[cls].empty() || touching[cls].back() != t)
        touching[cls].push_back(t);

  // Cover every class's copies with m triples whose scores clear `floor`.
  // Each level consumes the lowest class with copies left (any solution can
  // be reordered that way), so dead states memoize cleanly.
  std::vector<int> remaining;
  std::vector<std::array<int, 3>> chosen;
  std::unordered_set<std::string> dead;
  long nodes = 0;
  constexpr long kNodeCap = 200000;
  std::function<bool(int, double)> place = [&](int left, double floor) -> bool {
    if (left == 0) return true;
    if (++nodes > kNodeCap) return false;
    int x = 0;
    while (x < num_classes && remaining[x] == 0) ++x;
    if (x == num_classes) return false;
    std::string key;
    key.reserve(num_classes);
    for (int r : remaining) key.push_back(static_cast<char>(r));
    if (dead.count(key)) return false;
    for (int idx : touching[x]) {
      const TripleType& t = types[idx];
      if (t.score < floor) continue;
      --remaining[t.a];
      --remaining[t.b];
      --remaining[t.c];
      if (remaining[t.a] >= 0 && remaining[t.b] >= 0 && remaining[t.c] >= 0) {
        chosen.push_back({t.a, t.b, t.c});
        if (place(left - 1, floor)) return true;
        chosen.pop_back();
      }
      ++remaining[t.a];
      ++remaining[t.b];
      ++remaining[t.c];
    }
    dead.insert(std::move(key));
    return false;
  };
  auto solve = [&](double floor) {
    remaining.assign(num_classes, 0);
    for (int c = 0; c < num_classes; ++c)
      remaining[c] = static_cast<int>(classes[c].size());
    chosen.clear();
    dead.clear();
    nodes = 0;
    return place(m, floor);
  };

  std::vector<double> floors;
  floors.reserve(types.size());
  for (const auto& t : types) floors.push_back(t.score);
  std::sort(floors.begin(), floors.end(), std::greater<double>());
  floors.erase(std::unique(floors.begin(), floors.end()), floors.end());

  if (floors.empty() || !solve(floors.back()))
    throw InfeasibleError("group_eigenvalues: no valid triple grouping found");

  // Push the quality floor as high as feasibility allows (scores descend, so
  // feasibility is monotone over the sorted floors), then rebuild the
  // canonical selection at the winning floor.
  int lo = 0, hi = static_cast<int>(floors.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (solve(floors[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  solve(floors[lo]);

  std::vector<int> cursor(num_classes, 0);
  std::vector<std::array<int, 3>> triples;
  triples.reserve(chosen.size());
  for (const auto& t : chosen)
    triples.push_back({classes[t[0]][cursor[t[0]]++], classes[t[1]][cursor[t[1]]++],
                       classes[t[2]][cursor[t[2]]++]});
  return triples;
}

namespace {

void check_sigma_ratio(const Matrix& a, const char* what) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > kCertTol * sv(0)))
    throw DegenerateError(std::string(what) + ": rank certificate failed");
}

// How many seeded random regroupings are tried besides the bottleneck-optimal
// one, and the cap on local-refinement sweeps.
constexpr int kGroupingDraws = 96;
constexpr int kClimbPassLimit = 8;

// Zero-forcing joint-rate gain between the low and high ends of the design
// window, summed over both receivers, under the measurement convention of
// unit receiver noise and total power rho split evenly across a
// transmitter's unit-norm streams. The grouping that maximizes this gain is
// the one whose finished plan shows the steepest measured rate growth at
// moderate SNR.
double rate_growth_score(const ChannelSet& ch, const Matrix& v11, const Matrix& v12,
                         const Matrix& v21, const Matrix& v22) {
  const double p1 = 1.0 / static_cast<double>(v11.cols() + v21.cols());
  const double p2 = 1.0 / static_cast<double>(v12.cols() + v22.cols());
  double score = 0.0;
  for (int rx = 0; rx < 2; ++rx) {
    const Matrix& ha = rx == 0 ? ch.h11 : ch.h21;
    const Matrix& hb = rx == 0 ? ch.h12 : ch.h22;
    const Matrix& da = rx == 0 ? v11 : v21;  // desired arrivals
    const Matrix& db = rx == 0 ? v12 : v22;
    const Matrix& ea = rx == 0 ? v21 : v11;  // interference arrivals
    const Matrix& eb = rx == 0 ? v22 : v12;
    Matrix intf(ha.rows(), ea.cols() + eb.cols());
    intf << ha * ea, hb * eb;
    for (double rho : {detail::kDesignSnrHigh, detail::kDesignSnrLow}) {
      Matrix des(ha.rows(), da.cols() + db.cols());
      des << std::sqrt(rho * p1) * (ha * da), std::sqrt(rho * p2) * (hb * db);
      const double rate = detail::zf_projected_rate(des, intf);
      score += rho == detail::kDesignSnrHigh ? rate : -rate;
    }
  }
  return score;
}

}  // namespace

BeamformingPlan construct_three_symbol_plan(const ChannelSet& base, RngSeed seed) {
  base.validate();
  if (base.extension != 1)
    throw UsageError("three-symbol plan: expects an unextended channel set");
  if (!base.config.square())
    throw InfeasibleError("three-symbol plan: requires equal antenna counts");
  const int m = base.config.m1;
  if (m < 2)
    throw InfeasibleError(
        "three-symbol plan: m = 1 with a fixed channel admits no grouping (every "
        "product value repeats three times)");

  const Matrix f = product_matrix_f(base);
  const EigResult ef = eig(f);
  if (!(ef.basis_cond < kBasisCondLimit))
    throw DegenerateError("three-symbol plan: product-matrix eigenbasis is "
                          "ill-conditioned (defective or near-defective)");
  double lam_scale = 0.0;
  for (int i = 0; i < m; ++i) lam_scale = std::max(lam_scale, std::abs(ef.values(i)));
  for (int i = 0; i < m; ++i)
    if (std::abs(ef.values(i)) < kRankTol * lam_scale)
      throw DegenerateError("three-symbol plan: product matrix numerically singular");

  // Replicated spectrum over the three slots, slot-major.
  std::vector<Complex> values3(3 * m);
  for (int s = 0; s < 3; ++s)
    for (int j = 0; j < m; ++j) values3[s * m + j] = ef.values(j);

  const int ext = 3 * m;
  const ChannelSet ch3 = extend(base, 3);
  auto extended_vector = [&](int idx) {
    Vector v = Vector::Zero(ext);
    const int slot = idx / m, j = idx % m;
    v.segment(slot * m, m) = ef.vectors.col(j);
    return v;
  };

  using Grouping = std::vector<std::array<int, 3>>;
  struct Beams {
    Matrix v11, v12, v21, v22;
  };
  auto build_beams = [&](const Grouping& triples) {
    Beams b;
    b.v11 = Matrix(ext, m);
    b.v21 = Matrix(ext, m);
    for (int t = 0; t < m; ++t) {
      b.v11.col(t) = extended_vector(triples[t][0]) + extended_vector(triples[t][1]);
      b.v21.col(t) = extended_vector(triples[t][0]) + extended_vector(triples[t][2]);
    }
    b.v22 = solve_invertible(ch3.h12, ch3.h11 * b.v21, "three-symbol plan: h12");
    b.v12 = solve_invertible(ch3.h22, ch3.h21 * b.v11, "three-symbol plan: h22");
    for (Matrix* blk : {&b.v11, &b.v12, &b.v21, &b.v22})
      for (Eigen::Index c = 0; c < blk->cols(); ++c) blk->col(c).normalize();
    return b;
  };

  // Candidate groupings: the bottleneck-optimal partition plus seeded random
  // valid regroupings. Distinct groupings induce very different receive-side
  // conditioning, so trying several and keeping the one with the best
  // moderate-SNR rate growth buys robustness the eigenvalue pattern alone
  // cannot see (it is blind to channel and eigenbasis conditioning).
  auto valid_triple = [&](const std::array<int, 3>& tr) {
    const Complex la = values3[tr[0]];
    return std::abs(la - values3[tr[1]]) > kEigGroupTol * lam_scale &&
           std::abs(la - values3[tr[2]]) > kEigGroupTol * lam_scale;
  };

  std::vector<Grouping> candidates;
  candidates.push_back(group_eigenvalues(values3, m));
  {
    Rng rng(seed);
    std::vector<int> perm(ext);
    std::iota(perm.begin(), perm.end(), 0);
    for (int attempt = 0;
         attempt < 40 * kGroupingDraws &&
         static_cast<int>(candidates.size()) <= kGroupingDraws;
         ++attempt) {
      for (int i = ext - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.next_u64() % static_cast<std::uint64_t>(i + 1)]);
      Grouping g(m);
      bool valid = true;
      for (int t = 0; t < m && valid; ++t) {
        g[t] = {perm[3 * t], perm[3 * t + 1], perm[3 * t + 2]};
        valid = valid_triple(g[t]);
      }
      if (valid) candidates.push_back(std::move(g));
    }
  }

  Grouping triples;
  Beams beams;
  double best_score = -std::numeric_limits<double>::infinity();
  for (auto& g : candidates) {
    Beams b = build_beams(g);
    const double score = rate_growth_score(ch3, b.v11, b.v12, b.v21, b.v22);
    if (score > best_score) {
      best_score = score;
      beams = std::move(b);
      triples = std::move(g);
    }
  }

  // Greedy local refinement: swap any two grouping positions (leader or
  // follower, within or across triples) whenever the swap stays valid and
  // improves the score, until a full sweep finds no improvement.
  for (int pass = 0; pass < kClimbPassLimit; ++pass) {
    bool improved = false;
    for (int p = 0; p < ext; ++p) {
      for (int q = p + 1; q < ext; ++q) {
        Grouping g = triples;
        std::swap(g[p / 3][p % 3], g[q / 3][q % 3]);
        if (!valid_triple(g[p / 3]) || !valid_triple(g[q / 3])) continue;
        Beams b = build_beams(g);
        const double score = rate_growth_score(ch3, b.v11, b.v12, b.v21, b.v22);
        if (score > best_score) {
          best_score = score;
          beams = std::move(b);
          triples = std::move(g);
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  Matrix w11 = Matrix::Zero(ext, m), w21 = Matrix::Zero(ext, m);
  Vector lam_grouped(ext);
  for (int t = 0; t < m; ++t) {
    const auto& tr = triples[t];
    w11(3 * t, t) = w11(3 * t + 1, t) = 1.0;
    w21(3 * t, t) = w21(3 * t + 2, t) = 1.0;
    lam_grouped(3 * t) = values3[tr[0]];
    lam_grouped(3 * t + 1) = values3[tr[1]];
    lam_grouped(3 * t + 2) = values3[tr[2]];
  }

  // Eigendomain rank certificates: both pattern matrices must span the whole
  // extended space, which is exactly the leader-vs-follower distinctness.
  {
    Matrix a1(ext, 3 * m);
    a1 << w11, lam_grouped.asDiagonal() * w11, w21;
    check_sigma_ratio(a1, "three-symbol plan: pattern certificate (receiver 1)");
    Matrix a2(ext, 3 * m);
    a2 << w21, lam_grouped.cwiseInverse().asDiagonal() * w21, w11;
    check_sigma_ratio(a2, "three-symbol plan: pattern certificate (receiver 2)");
  }

  Matrix r1(ext, 3 * m);
  r1 << ch3.h11 * beams.v11, ch3.h12 * beams.v12, ch3.h11 * beams.v21;
  check_sigma_ratio(r1, "three-symbol plan: receiver 1 matrix");
  Matrix r2(ext, 3 * m);
  r2 << ch3.h21 * beams.v21, ch3.h22 * beams.v22, ch3.h21 * beams.v11;
  check_sigma_ratio(r2, "three-symbol plan: receiver 2 matrix");

  BeamformingPlan plan;
  plan.counts = IntTuple{{m, m, m, m}};
  plan.extension = 3;
  plan.v11 = std::move(beams.v11);
  plan.v12 = std::move(beams.v12);
  plan.v21 = std::move(beams.v21);
  plan.v22 = std::move(beams.v22);
  plan.rx1 = ReceiverMeta{0, 0, m, m};
  plan.rx2 = ReceiverMeta{0, 0, m, m};
  plan.aligned_rx1 = m;
  plan.aligned_rx2 = m;
  return plan;
}

BeamformingPlan construct_time_varying_plan(const ChannelSet& channels) {
  channels.validate();
  if (channels.kind != ExtensionKind::per_slot_diagonal || channels.extension != 3)
    throw InfeasibleError(
        "time-varying plan: requires a 3-slot per-slot-diagonal channel set "
        "(fixed single-antenna channels admit no such plan)");

  const Matrix f = product_matrix_f(channels);
  std::vector<Complex> fs = {f(0, 0), f(1, 1), f(2, 2)};
  // Throws when all slots are equal; otherwise seeds the candidate list.
  const auto baseline = group_eigenvalues(fs, 1)[0];

  struct Beams {
    Matrix v11, v12, v21, v22;
  };
  auto build_beams = [&](const std::array<int, 3>& tr) {
    Beams b;
    b.v11 = Matrix::Zero(3, 1);
    b.v21 = Matrix::Zero(3, 1);
    b.v11(tr[0], 0) = b.v11(tr[1], 0) = 1.0 / std::sqrt(2.0);
    b.v21(tr[0], 0) = b.v21(tr[2], 0) = 1.0 / std::sqrt(2.0);
    b.v22 = solve_invertible(channels.h12, channels.h11 * b.v21, "time-varying plan: h12");
    b.v12 = solve_invertible(channels.h22, channels.h21 * b.v11, "time-varying plan: h22");
    b.v22.col(0).normalize();
    b.v12.col(0).normalize();
    return b;
  };

  // Only six slot-role assignments exist, so rank every valid one by its
  // moderate-SNR rate growth and keep the best.
  double fs_scale = 0.0;
  for (const Complex& v : fs) fs_scale = std::max(fs_scale, std::abs(v));
  Beams beams = build_beams(baseline);
  double best_score = rate_growth_score(channels, beams.v11, beams.v12, beams.v21, beams.v22);
  std::array<int, 3> cand = {0, 1, 2};
  do {
    if (cand == baseline) continue;
    if (std::abs(fs[cand[0]] - fs[cand[1]]) <= kEigGroupTol * fs_scale ||
        std::abs(fs[cand[0]] - fs[cand[2]]) <= kEigGroupTol * fs_scale)
      continue;
    Beams b = build_beams(cand);
    const double score = rate_growth_score(channels, b.v11, b.v12, b.v21, b.v22);
    if (score > best_score) {
      best_score = score;
      beams = std::move(b);
    }
  } while (std::next_permutation(cand.begin(), cand.end()));

  Matrix v11 = std::move(beams.v11), v12 = std::move(beams.v12);
  Matrix v21 = std::move(beams.v21), v22 = std::move(beams.v22);

  {
    Matrix a1(3, 3);
    a1 << v11, f * v11, v21;
    check_sigma_ratio(a1, "time-varying plan: pattern certificate (receiver 1)");
    Matrix a2(3, 3);
    a2 << v21, solve_invertible(f, v21, "time-varying plan: product matrix"), v11;
    check_sigma_ratio(a2, "time-varying plan: pattern certificate (receiver 2)");
    Matrix r1(3, 3);
    r1 << channels.h11 * v11, channels.h12 * v12, channels.h11 * v21;
    check_sigma_ratio(r1, "time-varying plan: receiver 1 matrix");
    Matrix r2(3, 3);
    r2 << channels.h21 * v21, channels.h22 * v22, channels.h21 * v11;
    check_sigma_ratio(r2, "time-varying plan: receiver 2 matrix");
  }

  BeamformingPlan plan;
  plan.counts = IntTuple{{1, 1, 1, 1}};
  plan.extension = 3;
  plan.v11 = std::move(v11);
  plan.v12 = std::move(v12);
  plan.v21 = std::move(v21);
  plan.v22 = std::move(v22);
  plan.rx1 = ReceiverMeta{0, 0, 1, 1};
  plan.rx2 = ReceiverMeta{0, 0, 1, 1};
  plan.aligned_rx1 = 1;
  plan.aligned_rx2 = 1;
  return plan;
}

}  // namespace xalign
