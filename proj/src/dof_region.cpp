#include "xalign/dof_region.hpp"

#include <algorithm>
#include <map>

namespace xalign {

std::string rational_to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

DofPolytope outerbound_polytope(const AntennaConfig& cfg) {
  cfg.validate();
  const long long m1 = cfg.m1, m2 = cfg.m2, n1 = cfg.n1, n2 = cfg.n2;
  DofPolytope p;
  p.rows = {
      Inequality{{1, 1, 1, 0}, std::max(n1, m1)},
      Inequality{{1, 1, 0, 1}, std::max(n1, m2)},
      Inequality{{1, 0, 1, 1}, std::max(n2, m1)},
      Inequality{{0, 1, 1, 1}, std::max(n2, m2)},
      Inequality{{1, 1, 0, 0}, n1},
      Inequality{{0, 0, 1, 1}, n2},
      Inequality{{1, 0, 1, 0}, m1},
      Inequality{{0, 1, 0, 1}, m2},
  };
  return p;
}

bool contains(const DofPolytope& poly, const DofTuple& d) {
  for (const auto& v : d.d)
    if (v < 0) return false;
  for (const auto& row : poly.rows) {
    Rational lhs = 0;
    for (int j = 0; j < 4; ++j) lhs += row.c[j] * d.d[j];
    if (lhs > row.b) return false;
  }
  return true;
}

namespace {

// Exact vertex enumeration: every 4-subset of {rows, d_j >= 0} is solved as
// an equality system by Cramer's rule. The arithmetic is templated so small
// instances run in int64 (bounds checked below make overflow impossible) and
// anything larger falls back to arbitrary precision.

template <typename I>
I det3(I a, I b, I c, I d, I e, I f, I g, I h, I i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

template <typename I>
I det4(const std::array<std::array<I, 4>, 4>& m) {
  I det = 0;
  for (int col = 0; col < 4; ++col) {
    std::array<I, 9> mm;
    int k = 0;
    for (int r = 1; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if (c != col) mm[k++] = m[r][c];
    const I minor =
        det3(mm[0], mm[1], mm[2], mm[3], mm[4], mm[5], mm[6], mm[7], mm[8]);
    if (col % 2 == 0)
      det += m[0][col] * minor;
    else
      det -= m[0][col] * minor;
  }
  return det;
}

template <typename I>
struct Constraint {
  std::array<I, 4> c;
  I b;
};

template <typename I>
std::vector<DofTuple> candidate_vertices(const std::vector<Constraint<I>>& cons) {
  const int n = static_cast<int>(cons.size());
  std::map<std::array<Rational, 4>, bool> seen;
  std::vector<DofTuple> out;

  std::array<std::array<I, 4>, 4> a;
  std::array<I, 4> rhs;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = i0 + 1; i1 < n; ++i1)
      for (int i2 = i1 + 1; i2 < n; ++i2)
        for (int i3 = i2 + 1; i3 < n; ++i3) {
          const int idx[4] = {i0, i1, i2, i3};
          for (int r = 0; r < 4; ++r) {
            a[r] = cons[idx[r]].c;
            rhs[r] = cons[idx[r]].b;
          }
          const I det = det4(a);
          if (det == 0) continue;

          // Cramer: numerator determinant per coordinate.
          std::array<I, 4> num;
          for (int col = 0; col < 4; ++col) {
            std::array<std::array<I, 4>, 4> ac = a;
            for (int r = 0; r < 4; ++r) ac[r][col] = rhs[r];
            num[col] = det4(ac);
          }

          bool feasible = true;
          for (const auto& row : cons) {
            I lhs = 0;
            for (int j = 0; j < 4; ++j) lhs += row.c[j] * num[j];
            const I bound = row.b * det;
            if (det > 0 ? lhs > bound : lhs < bound) {
              feasible = false;
              break;
            }
          }
          if (!feasible) continue;

          // cpp_rational rejects negative denominators; keep det positive.
          const I sgn = det > 0 ? I(1) : I(-1);
          std::array<Rational, 4> point;
          for (int j = 0; j < 4; ++j)
            point[j] = Rational(BigInt(sgn * num[j]), BigInt(sgn * det));
          if (seen.emplace(point, true).second) {
            DofTuple t;
            t.d = point;
            out.push_back(t);
          }
        }
  return out;
}

std::vector<DofTuple> candidate_vertices_dispatch(const DofPolytope& poly) {
  long long max_c = 1, max_b = 1;
  for (const auto& row : poly.rows) {
    for (long long c : row.c) max_c = std::max(max_c, std::abs(c));
    max_b = std::max(max_b, std::abs(row.b));
  }
  // int64 is safe when 96 * C^4 * B fits: C <= 64, B <= 2^20 keeps the
  // largest intermediate below 2^63.
  if (max_c <= 64 && max_b <= (1LL << 20)) {
    std::vector<Constraint<long long>> cons;
    for (const auto& row : poly.rows) cons.push_back({row.c, row.b});
    for (int j = 0; j < 4; ++j) {
      Constraint<long long> nn{{0, 0, 0, 0}, 0};
      nn.c[j] = -1;
      cons.push_back(nn);
    }
    return candidate_vertices(cons);
  }
  std::vector<Constraint<BigInt>> cons;
  for (const auto& row : poly.rows) {
    Constraint<BigInt> c;
    for (int j = 0; j < 4; ++j) c.c[j] = row.c[j];
    c.b = row.b;
    cons.push_back(c);
  }
  for (int j = 0; j < 4; ++j) {
    Constraint<BigInt> nn{{BigInt(0), BigInt(0), BigInt(0), BigInt(0)}, BigInt(0)};
    nn.c[j] = -1;
    cons.push_back(nn);
  }
  return candidate_vertices(cons);
}

}  // namespace

std::vector<RegionVertex> enumerate_vertices(const DofPolytope& poly) {
  std::vector<DofTuple> points = candidate_vertices_dispatch(poly);
  std::sort(points.begin(), points.end(),
            [](const DofTuple& a, const DofTuple& b) { return a.d < b.d; });

  const int nrows = static_cast<int>(poly.rows.size());
  std::vector<RegionVertex> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    RegionVertex v;
    v.point = p;
    for (int i = 0; i < nrows; ++i) {
      Rational lhs = 0;
      for (int j = 0; j < 4; ++j) lhs += poly.rows[i].c[j] * p.d[j];
      if (lhs == poly.rows[i].b) v.active.push_back(i);
    }
    for (int j = 0; j < 4; ++j)
      if (p.d[j] == 0) v.active.push_back(nrows + j);
    out.push_back(std::move(v));
  }
  return out;
}

MaxWeightedSum max_weighted_sum(const DofPolytope& poly,
                                const std::array<long long, 4>& weights) {
  const auto vertices = enumerate_vertices(poly);
  if (vertices.empty())
    throw InfeasibleError("max_weighted_sum: polytope has no vertices");
  MaxWeightedSum best;
  bool first = true;
  for (const auto& v : vertices) {
    Rational val = 0;
    for (int j = 0; j < 4; ++j) val += weights[j] * v.point.d[j];
    if (first || val > best.value) {  // vertices sorted: ties keep lex-smallest
      best.value = val;
      best.argmax = v.point;
      first = false;
    }
  }
  return best;
}

Rational eta_out_closed_form(const AntennaConfig& cfg) {
  cfg.validate();
  const long long m1 = cfg.m1, m2 = cfg.m2, n1 = cfg.n1, n2 = cfg.n2;
  const auto mx = [](long long a, long long b) { return std::max(a, b); };
  const std::array<Rational, 7> terms = {
      Rational(m1 + m2),
      Rational(n1 + n2),
      Rational(mx(m1, n1) + mx(m1, n2) + m2, 2),
      Rational(mx(m2, n1) + mx(m2, n2) + m1, 2),
      Rational(mx(m1, n1) + mx(m2, n1) + n2, 2),
      Rational(mx(m1, n2) + mx(m2, n2) + n1, 2),
      Rational(mx(m1, n1) + mx(m1, n2) + mx(m2, n1) + mx(m2, n2), 3),
  };
  return *std::min_element(terms.begin(), terms.end());
}

long long eta_mbi(const AntennaConfig& cfg) {
  cfg.validate();
  const long long m1 = cfg.m1, m2 = cfg.m2, n1 = cfg.n1, n2 = cfg.n2;
  return std::min({m1 + m2, n1 + n2, std::max({m1, m2, n1, n2})});
}

IntegerInnerbound integer_innerbound_max(const AntennaConfig& cfg) {
  cfg.validate();
  const auto poly = outerbound_polytope(cfg);
  const long long b11 = std::min<long long>(cfg.n1, cfg.m1);
  const long long b12 = std::min<long long>(cfg.n1, cfg.m2);
  const long long b21 = std::min<long long>(cfg.n2, cfg.m1);
  const long long b22 = std::min<long long>(cfg.n2, cfg.m2);
  IntegerInnerbound best;
  best.value = -1;
  for (long long d11 = 0; d11 <= b11; ++d11)
    for (long long d12 = 0; d12 <= b12; ++d12)
      for (long long d21 = 0; d21 <= b21; ++d21)
        for (long long d22 = 0; d22 <= b22; ++d22) {
          const std::array<long long, 4> d{d11, d12, d21, d22};
          bool ok = true;
          for (const auto& row : poly.rows) {
            long long lhs = 0;
            for (int j = 0; j < 4; ++j) lhs += row.c[j] * d[j];
            if (lhs > row.b) {
              ok = false;
              break;
            }
          }
          if (!ok) continue;
          const long long total = d11 + d12 + d21 + d22;
          if (total > best.value) {  // ascending scan keeps lex-smallest argmax
            best.value = total;
            best.argmax = d;
          }
        }
  return best;
}

bool check_zfx_bound(const AntennaConfig& cfg) {
  return eta_out_closed_form(cfg) <= Rational(4 * eta_mbi(cfg), 3);
}

ScaledVertex normalize_scale(const DofTuple& point) {
  ScaledVertex out;
  out.kappa = 1;
  for (const auto& r : point.d)
    out.kappa = boost::multiprecision::lcm(out.kappa,
                                           boost::multiprecision::denominator(r));
  for (int j = 0; j < 4; ++j)
    out.scaled[j] = boost::multiprecision::numerator(point.d[j]) *
                    (out.kappa / boost::multiprecision::denominator(point.d[j]));
  return out;
}

DofPolytope cognitive_polytope(long long m) {
  if (m < 1) throw UsageError("cognitive_polytope: antenna count must be >= 1");
  DofPolytope p;
  p.rows = {
      Inequality{{0, 1, 1, 1}, m},
      Inequality{{1, 1, 0, 1}, m},
      Inequality{{1, 1, 1, 0}, m},
  };
  return p;
}

}  // namespace xalign
