#pragma once

#include "xalign/dof_region.hpp"

namespace xalign {

// Per-configuration region checks: the closed form against the exact vertex
// enumeration, the integer/outer sandwich, the 4/3 bound against the
// single-message baseline, and integrality closure of every scaled vertex.
struct ConfigCheck {
  AntennaConfig config;
  Rational eta_closed;
  Rational eta_lp;
  bool oracle_match = false;
  long long mbi = 0;
  bool zfx_ok = false;
  long long int_inner = 0;
  std::array<long long, 4> int_argmax{};
  bool sandwich_ok = false;
  bool normalize_ok = false;
  int vertex_count = 0;

  bool all_ok() const { return oracle_match && zfx_ok && sandwich_ok && normalize_ok; }
};

ConfigCheck check_config(const AntennaConfig& config);

// All (m1, m2, n1, n2) in [lo, hi]^4, in lexicographic order. The parallel
// version runs the same per-config kernel under OpenMP with results written
// into fixed slots, so its output is identical to the serial reference.
std::vector<ConfigCheck> sweep_grid_serial(int lo, int hi);
std::vector<ConfigCheck> sweep_grid_parallel(int lo, int hi);
std::vector<ConfigCheck> sweep_grid(int lo, int hi, int jobs);  // jobs 1: serial

}  // namespace xalign
