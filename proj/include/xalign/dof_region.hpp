#pragma once

#include "xalign/types.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace xalign {

// Exact arithmetic for the region computations. cpp_rational keeps values
// reduced with a positive denominator, which the serialization relies on.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

std::string rational_to_string(const Rational& r);  // always "p/q", reduced

// One point (d11, d12, d21, d22) of the region, exact.
struct DofTuple {
  std::array<Rational, 4> d{};

  Rational sum() const { return d[0] + d[1] + d[2] + d[3]; }
  bool operator==(const DofTuple&) const = default;
};

// c . d <= b with integer coefficients; d >= 0 is implicit everywhere.
struct Inequality {
  std::array<long long, 4> c{};
  long long b = 0;
};

struct DofPolytope {
  std::vector<Inequality> rows;
};

// A vertex together with the indices of every constraint tight at it.
// Indices 0..rows-1 address the polytope rows, rows+j the facet d_j >= 0.
struct RegionVertex {
  DofTuple point;
  std::vector<int> active;
};

// Outer bound for a given antenna configuration, rows in the fixed order:
//   0: d11+d12+d21 <= max(n1, m1)     4: d11+d12 <= n1
//   1: d11+d12+d22 <= max(n1, m2)     5: d21+d22 <= n2
//   2: d11+d21+d22 <= max(n2, m1)     6: d11+d21 <= m1
//   3: d12+d21+d22 <= max(n2, m2)     7: d12+d22 <= m2
DofPolytope outerbound_polytope(const AntennaConfig& config);

bool contains(const DofPolytope& poly, const DofTuple& d);

// All vertices of {d >= 0, rows satisfied}, exact, deduplicated, sorted
// lexicographically by point. Requires a bounded polytope.
std::vector<RegionVertex> enumerate_vertices(const DofPolytope& poly);

struct MaxWeightedSum {
  Rational value;
  DofTuple argmax;  // lexicographically smallest among ties
};

MaxWeightedSum max_weighted_sum(const DofPolytope& poly,
                                const std::array<long long, 4>& weights);

// Closed-form total-DoF bound (minimum of seven terms).
Rational eta_out_closed_form(const AntennaConfig& config);

// min(m1+m2, n1+n2, max(m1, m2, n1, n2)).
long long eta_mbi(const AntennaConfig& config);

struct IntegerInnerbound {
  long long value = 0;
  std::array<long long, 4> argmax{};  // lexicographically smallest
};

// Best integer point of the outer polytope (every such point is achievable
// by the zero-forcing/alignment construction).
IntegerInnerbound integer_innerbound_max(const AntennaConfig& config);

// eta_out <= (4/3) * eta_mbi, checked exactly.
bool check_zfx_bound(const AntennaConfig& config);

struct ScaledVertex {
  BigInt kappa;                  // lcm of the four reduced denominators
  std::array<BigInt, 4> scaled;  // kappa * point, integral
};

ScaledVertex normalize_scale(const DofTuple& point);

// Converse polytope for the cognitive-receiver setup with m antennas each:
// three triple-sum bounds whose weighted-sum maximum is exactly 3m/2.
DofPolytope cognitive_polytope(long long m);

}  // namespace xalign
