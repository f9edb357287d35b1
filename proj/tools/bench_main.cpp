// Compares the OpenMP trial/search drivers against their serial reference
// implementations: wall time, speedup, and bit-for-bit agreement of results.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "ria/optimizer.hpp"
#include "ria/scheme.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool same_aggregate(const ria::TrialAggregate& a, const ria::TrialAggregate& b) {
  if (a.pass_count != b.pass_count || a.fail_count != b.fail_count ||
      a.degenerate_count != b.degenerate_count || a.trials.size() != b.trials.size())
    return false;
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    const auto& x = a.trials[t];
    const auto& y = b.trials[t];
    if (x.pass != y.pass || x.s_dims != y.s_dims ||
        x.max_alignment_residual != y.max_alignment_residual)
      return false;
    for (int rx = 0; rx < 3; ++rx) {
      if (x.receivers[rx].interference_rank != y.receivers[rx].interference_rank ||
          x.receivers[rx].zf_leakage != y.receivers[rx].zf_leakage)
        return false;
    }
  }
  return true;
}

void bench_trials(int m, int n, int trials, std::uint64_t seed) {
  const ria::AntennaConfig cfg(m, n);
  const ria::SchemeParams params = ria::closed_form(cfg);

  auto t0 = Clock::now();
  const auto serial = ria::run_trials_serial(cfg, params, trials, seed);
  const double serial_ms = ms_since(t0);

  t0 = Clock::now();
  const auto parallel = ria::run_trials(cfg, params, trials, seed);
  const double parallel_ms = ms_since(t0);

  std::printf("trials (M=%d, N=%d, %d trials)   serial %8.1f ms   omp %8.1f ms   "
              "speedup %.2fx   results %s\n",
              m, n, trials, serial_ms, parallel_ms, serial_ms / parallel_ms,
              same_aggregate(serial, parallel) ? "identical" : "DIFFER");
}

void bench_search(int m, int n) {
  const ria::AntennaConfig cfg(m, n);
  const auto bounds = ria::default_bounds(cfg);

  auto t0 = Clock::now();
  const auto serial = ria::brute_force_serial(cfg, bounds);
  const double serial_ms = ms_since(t0);

  t0 = Clock::now();
  const auto parallel = ria::brute_force(cfg, bounds);
  const double parallel_ms = ms_since(t0);

  std::printf("search (M=%d, N=%d)              serial %8.1f ms   omp %8.1f ms   "
              "speedup %.2fx   results %s\n",
              m, n, serial_ms, parallel_ms, serial_ms / parallel_ms,
              serial == parallel ? "identical" : "DIFFER");
}

}  // namespace

int main() {
  std::printf("OpenMP max threads: %d\n\n", omp_get_max_threads());
  bench_trials(3, 5, 60, 42);
  bench_trials(2, 3, 60, 42);
  bench_trials(5, 9, 12, 42);
  bench_search(11, 12);
  bench_search(12, 12);
  bench_search(9, 16);
  return 0;
}
