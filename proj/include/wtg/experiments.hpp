#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wtg/sim_kinematic.hpp"
#include "wtg/sim_sixdof.hpp"

namespace wtg {

enum class fidelity_kind { kinematic, sixdof };

/// Scenario shared by the stock experiments; defaults reproduce the
/// 4 m x 3 m window case with a 1 m/s traversal speed.
struct scenario {
  window_spec win = default_window();
  guidance_config guidance;
  controller_gains gains;
  quad_params params;
  double dt_kinematic = 0.005;  // [s]
  double dt_sixdof = 0.002;     // [s]
  double t_max = 120.0;         // [s]
};

/// SplitMix64 finalizer; the substream hash below builds on it.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic per-run RNG substream: decorrelates (sigma index, run index)
/// pairs so Monte-Carlo results are independent of execution order.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t sigma_index, std::uint64_t run_index);

/// Adds an independent N(0, sigma^2) draw to each of the eight angles and
/// clamps to the legal ranges. Draw order: alpha 1..4, then beta 1..4.
bearing_set corrupt_bearings(const bearing_set& truth, double sigma, std::mt19937_64& rng);

/// Noise-free closed 6-DOF loop from the origin.
run_result run_case1(const scenario& sc = {});

/// Same scenario with unfiltered noisy bearings driving the guidance.
run_result run_case2(double sigma, std::uint64_t seed, const scenario& sc = {});

/// Kinematic point-mass loop with per-step measured (noisy) bearings: the
/// command is sampled once per step and held, so each step is an exact
/// constant-velocity translation. Complements the smooth noise-free
/// integrator in sim_kinematic.
run_result run_kinematic_measured(const vec3& start, const scenario& sc,
                                  double dt, double sigma, std::mt19937_64& rng,
                                  bool record_trace);

struct monte_carlo_spec {
  int n_runs = 100;
  double box_x[2] = {0.0, 30.0};  // [m]
  double box_y[2] = {0.0, 14.0};  // [m]
  double box_z[2] = {0.0, 20.0};  // [m]
  std::vector<double> sigma_list;  // [rad]
  std::uint64_t master_seed = 1;
  int threads = 0;                 // 0 = library default
  fidelity_kind fidelity = fidelity_kind::sixdof;
};

struct sigma_stats {
  double sigma = 0.0;        // [rad]
  double mean_miss = 0.0;    // [m] over runs that reached the plane
  double std_miss = 0.0;     // [m] sample standard deviation
  double success_rate = 0.0; // fraction of runs crossing inside the window
  int n = 0;                 // runs attempted
  int failures = 0;          // runs that never reached the plane
};

struct per_run_record {
  int sigma_index = 0;
  int run_index = 0;
  vec3 start;
  double miss = 0.0;  // [m]
  double t_T = 0.0;   // [s]
  bool crossed = false;
  bool success = false;
  run_result::status outcome = run_result::status::converged;
};

struct monte_carlo_stats {
  std::vector<sigma_stats> rows;
  std::vector<per_run_record> runs;  // ordered by (sigma index, run index)
};

/// @brief Draws a start uniformly from the box, resampling positions that are
/// unusable for a traversal run: on the wrong side of the window plane, or so
/// deep in the near-plane corner that the initial commanded climb folds past
/// the vertical (no command from there can reach the window before the plane).
vec3 sample_start(std::mt19937_64& rng, const monte_carlo_spec& spec, const window_spec& win);

/// OpenMP batch; identical results to run_monte_carlo_serial bit for bit,
/// for any thread count.
monte_carlo_stats run_monte_carlo(const monte_carlo_spec& spec, const scenario& sc = {});

/// Single-threaded reference implementation of the same reduction.
monte_carlo_stats run_monte_carlo_serial(const monte_carlo_spec& spec, const scenario& sc = {});

}  // namespace wtg
