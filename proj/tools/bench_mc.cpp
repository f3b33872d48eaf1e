// Benchmark: OpenMP Monte-Carlo batch against the single-threaded reference,
// with a bit-identity check between the two result sets.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wtg/experiments.hpp"

using namespace wtg;

namespace {

double time_call(monte_carlo_stats (*fn)(const monte_carlo_spec&, const scenario&),
                 const monte_carlo_spec& spec, monte_carlo_stats& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = fn(spec, scenario{});
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool identical(const monte_carlo_stats& a, const monte_carlo_stats& b) {
  if (a.runs.size() != b.runs.size() || a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    if (a.runs[i].start.x != b.runs[i].start.x) return false;
    if (a.runs[i].start.y != b.runs[i].start.y) return false;
    if (a.runs[i].start.z != b.runs[i].start.z) return false;
    if (a.runs[i].miss != b.runs[i].miss) return false;
    if (a.runs[i].t_T != b.runs[i].t_T) return false;
    if (a.runs[i].crossed != b.runs[i].crossed) return false;
    if (a.runs[i].success != b.runs[i].success) return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].mean_miss != b.rows[i].mean_miss) return false;
    if (a.rows[i].std_miss != b.rows[i].std_miss) return false;
    if (a.rows[i].success_rate != b.rows[i].success_rate) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  monte_carlo_spec spec;
  spec.n_runs = argc > 1 ? std::atoi(argv[1]) : 200;
  spec.fidelity = argc > 2 && std::string(argv[2]) == "sixdof" ? fidelity_kind::sixdof
                                                               : fidelity_kind::kinematic;
  spec.master_seed = 7;
  for (int d = 1; d <= 7; ++d) spec.sigma_list.push_back(d * M_PI / 180.0);
  if (spec.n_runs < 1) {
    std::fprintf(stderr, "usage: %s [n_runs] [kinematic|sixdof]\n", argv[0]);
    return 1;
  }

  const int total = spec.n_runs * static_cast<int>(spec.sigma_list.size());
  std::printf("batch: %d runs (%d per sigma, %zu sigma levels, %s fidelity)\n", total,
              spec.n_runs, spec.sigma_list.size(),
              spec.fidelity == fidelity_kind::sixdof ? "rigid-body" : "kinematic");

  monte_carlo_stats serial, parallel;
  const double t_serial = time_call(run_monte_carlo_serial, spec, serial);
  std::printf("serial reference: %8.3f s  (%.2f runs/s)\n", t_serial, total / t_serial);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
#endif
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    spec.threads = threads;
    const double t_par = time_call(run_monte_carlo, spec, parallel);
    const bool same = identical(serial, parallel);
    std::printf("omp %2d thread%s:   %8.3f s  (%.2f runs/s, speedup %.2fx, results %s)\n",
                threads, threads == 1 ? " " : "s", t_par, total / t_par, t_serial / t_par,
                same ? "identical" : "DIFFER");
    if (!same) return 1;
  }
  return 0;
}
