#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "xalign/simulator.hpp"
#include "xalign/sweep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace xalign;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int grid_hi = argc > 1 ? std::atoi(argv[1]) : 5;
  const int plan_m = argc > 2 ? std::atoi(argv[2]) : 3;
  const int plan_reps = argc > 3 ? std::atoi(argv[3]) : 40;
  if (grid_hi < 1 || grid_hi > 8 || plan_m < 2 || plan_reps < 1) {
    std::fprintf(stderr, "usage: %s [grid_hi<=8] [plan_m>=2] [plan_reps]\n", argv[0]);
    return 2;
  }

#ifdef _OPENMP
  std::printf("openmp: enabled (max threads %d)\n", omp_get_max_threads());
#else
  std::printf("openmp: not available (parallel path falls back to serial)\n");
#endif

  std::printf("\nregion sweep over the %d^4 antenna grid (exact rational vertex "
              "enumeration):\n", grid_hi);
  auto t0 = Clock::now();
  const auto serial = sweep_grid_serial(1, grid_hi);
  const double t_serial = seconds_since(t0);

  t0 = Clock::now();
  const auto parallel = sweep_grid_parallel(1, grid_hi);
  const double t_parallel = seconds_since(t0);

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i) {
    identical = serial[i].config == parallel[i].config &&
                serial[i].eta_lp == parallel[i].eta_lp &&
                serial[i].int_inner == parallel[i].int_inner &&
                serial[i].all_ok() == parallel[i].all_ok();
  }

  std::printf("  %-10s %8.3fs  (%zu configs)\n", "serial", t_serial, serial.size());
  std::printf("  %-10s %8.3fs  speedup %.2fx, results %s\n", "parallel", t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0,
              identical ? "identical" : "DIFFER");

  std::printf("\nthree-symbol plan construction + rate point, m = %d, %d seeds:\n",
              plan_m, plan_reps);
  const AntennaConfig cfg{plan_m, plan_m, plan_m, plan_m};
  t0 = Clock::now();
  double sink = 0;
  for (int s = 1; s <= plan_reps; ++s) {
    const ChannelSet base = random_channel_set(cfg, RngSeed{static_cast<unsigned>(s)});
    const BeamformingPlan plan = construct_three_symbol_plan(base, RngSeed{1});
    sink += zf_sum_rate(extend(base, 3), plan, 1e4).sum;
  }
  const double t_plans = seconds_since(t0);
  std::printf("  %8.3fs total, %.1f ms/seed (checksum %.6f)\n", t_plans,
              1e3 * t_plans / plan_reps, sink);

  return identical ? 0 : 1;
}
