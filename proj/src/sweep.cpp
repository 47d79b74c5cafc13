#include "xalign/sweep.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace xalign {

namespace {

// kappa-scaled integrality closure: kappa * vertex must reproduce the exact
// point and satisfy every inequality of the kappa-dilated polytope.
bool scaled_vertex_closes(const DofPolytope& poly, const DofTuple& point) {
  ScaledVertex sv = normalize_scale(point);
  if (sv.kappa < 1) return false;
  for (int j = 0; j < 4; ++j) {
    if (sv.scaled[j] < 0) return false;
    if (Rational(sv.scaled[j], sv.kappa) != point.d[j]) return false;
  }
  for (const Inequality& row : poly.rows) {
    BigInt lhs = 0;
    for (int j = 0; j < 4; ++j) lhs += BigInt(row.c[j]) * sv.scaled[j];
    if (lhs > BigInt(row.b) * sv.kappa) return false;
  }
  return true;
}

}  // namespace

ConfigCheck check_config(const AntennaConfig& config) {
  config.validate();
  ConfigCheck out;
  out.config = config;
  out.eta_closed = eta_out_closed_form(config);

  DofPolytope poly = outerbound_polytope(config);
  std::vector<RegionVertex> vertices = enumerate_vertices(poly);
  out.vertex_count = static_cast<int>(vertices.size());

  MaxWeightedSum lp = max_weighted_sum(poly, {1, 1, 1, 1});
  out.eta_lp = lp.value;
  out.oracle_match = (out.eta_closed == out.eta_lp);

  out.mbi = eta_mbi(config);
  out.zfx_ok = check_zfx_bound(config);

  IntegerInnerbound inner = integer_innerbound_max(config);
  out.int_inner = inner.value;
  out.int_argmax = inner.argmax;

  Rational cap(std::min<long long>(config.m1 + config.m2, config.n1 + config.n2));
  out.sandwich_ok = Rational(out.int_inner) <= out.eta_lp && out.eta_lp <= cap;

  out.normalize_ok = true;
  for (const RegionVertex& v : vertices) {
    if (!scaled_vertex_closes(poly, v.point)) {
      out.normalize_ok = false;
      break;
    }
  }
  return out;
}

namespace {

AntennaConfig decode(int lo, int span, long long flat) {
  AntennaConfig cfg;
  cfg.n2 = lo + static_cast<int>(flat % span);
  flat /= span;
  cfg.n1 = lo + static_cast<int>(flat % span);
  flat /= span;
  cfg.m2 = lo + static_cast<int>(flat % span);
  flat /= span;
  cfg.m1 = lo + static_cast<int>(flat % span);
  return cfg;
}

long long grid_size(int lo, int hi) {
  if (lo < 1 || hi < lo) throw UsageError("sweep range must satisfy 1 <= lo <= hi");
  long long span = hi - lo + 1;
  return span * span * span * span;
}

}  // namespace

std::vector<ConfigCheck> sweep_grid_serial(int lo, int hi) {
  const long long total = grid_size(lo, hi);
  const int span = hi - lo + 1;
  std::vector<ConfigCheck> out(static_cast<size_t>(total));
  for (long long i = 0; i < total; ++i) {
    out[static_cast<size_t>(i)] = check_config(decode(lo, span, i));
  }
  return out;
}

std::vector<ConfigCheck> sweep_grid_parallel(int lo, int hi) {
  const long long total = grid_size(lo, hi);
  const int span = hi - lo + 1;
  std::vector<ConfigCheck> out(static_cast<size_t>(total));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < total; ++i) {
    out[static_cast<size_t>(i)] = check_config(decode(lo, span, i));
  }
  return out;
}

std::vector<ConfigCheck> sweep_grid(int lo, int hi, int jobs) {
  if (jobs < 1) throw UsageError("sweep jobs must be >= 1");
  if (jobs == 1) return sweep_grid_serial(lo, hi);
#ifdef _OPENMP
  omp_set_num_threads(jobs);
#endif
  return sweep_grid_parallel(lo, hi);
}

}  // namespace xalign
