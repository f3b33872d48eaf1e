#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "wtg/experiments.hpp"
#include "wtg/guidance.hpp"

using namespace wtg;

namespace {
constexpr double k_deg = M_PI / 180.0;

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}
}  // namespace

TEST_CASE("seed hashing") {
  // Finalizer and substream hash frozen against an independent
  // reimplementation of the same mixing constants.
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFull);
  CHECK(mix_seed(1, 0, 0) == 0x81ab9fcbf0d676e4ull);
  CHECK(mix_seed(1, 0, 1) == 0x1edaf1567ef8675dull);
  CHECK(mix_seed(1, 1, 0) == 0xe39e3ea39999c05cull);
  CHECK(mix_seed(42, 3, 17) == 0x59b555ca2eb33ccfull);
  CHECK(mix_seed(0, 6, 99) == 0x397272bafd1710fdull);
}

TEST_CASE("bearing corruption") {
  const window_spec win = default_window();
  const bearing_set truth = bearing_angles({0.0, 0.0, 0.0}, win);

  SUBCASE("zero sigma is the identity and consumes no randomness") {
    std::mt19937_64 a(7), b(7);
    const bearing_set out = corrupt_bearings(truth, 0.0, a);
    for (int i = 0; i < 4; ++i) {
      CHECK(out.alpha[i] == truth.alpha[i]);
      CHECK(out.beta[i] == truth.beta[i]);
    }
    CHECK(a() == b());
  }

  SUBCASE("draw order is elevations then azimuths") {
    const double sigma = 2.0 * k_deg;
    std::mt19937_64 rng(99);
    const bearing_set out = corrupt_bearings(truth, sigma, rng);

    std::mt19937_64 mirror(99);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (int i = 0; i < 4; ++i)
      CHECK(out.alpha[i] == clamp(truth.alpha[i] + gauss(mirror), -M_PI_2, M_PI_2));
    for (int i = 0; i < 4; ++i)
      CHECK(out.beta[i] == clamp(truth.beta[i] + gauss(mirror), 0.0, M_PI));
  }

  SUBCASE("outputs stay inside the legal angle ranges") {
    std::mt19937_64 rng(3);
    bool hit_alpha_clamp = false;
    for (int k = 0; k < 2000; ++k) {
      const bearing_set out = corrupt_bearings(truth, 5.0, rng);  // huge noise
      for (int i = 0; i < 4; ++i) {
        CHECK(out.alpha[i] >= -M_PI_2);
        CHECK(out.alpha[i] <= M_PI_2);
        CHECK(out.beta[i] >= 0.0);
        CHECK(out.beta[i] <= M_PI);
        if (out.alpha[i] == M_PI_2 || out.alpha[i] == -M_PI_2) hit_alpha_clamp = true;
      }
    }
    CHECK(hit_alpha_clamp);
  }

  SUBCASE("noise statistics match the requested sigma") {
    const double sigma = 1.0 * k_deg;  // far from the clamps at this position
    std::mt19937_64 rng(2024);
    double sum = 0.0, sum_sq = 0.0;
    const int calls = 200000;
    for (int k = 0; k < calls; ++k) {
      const bearing_set out = corrupt_bearings(truth, sigma, rng);
      for (int i = 0; i < 4; ++i) {
        const double da = out.alpha[i] - truth.alpha[i];
        const double db = out.beta[i] - truth.beta[i];
        sum += da + db;
        sum_sq += da * da + db * db;
      }
    }
    const double n = 8.0 * calls;
    const double mean = sum / n;
    const double stddev = std::sqrt(sum_sq / n - mean * mean);
    CHECK(std::fabs(mean) <= 0.02 * k_deg);
    CHECK(stddev == doctest::Approx(sigma).epsilon(0.02));
  }
}

TEST_CASE("start sampling") {
  const window_spec win = default_window();
  const monte_carlo_spec spec;

  SUBCASE("samples land in the box and pass the feasibility gate") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1000; ++k) {
      const vec3 p = sample_start(rng, spec, win);
      CHECK(p.x >= 0.0);
      CHECK(p.x <= 30.0);
      CHECK(p.y >= 0.0);
      CHECK(p.y <= 14.0);
      CHECK(p.z >= 0.0);
      CHECK(p.z <= 20.0);
      const bearing_set b = bearing_angles(p, win);
      const double m = 0.5 * (b.alpha[0] + b.alpha[3]);
      CHECK(std::fabs(m + shaping_gamma(m)) <= M_PI_2);
    }
  }

  SUBCASE("the near-plane fold corner is excluded") {
    // From this corner the commanded climb folds past the vertical; a run
    // started there would fly away from the window. The sampler's gate is
    // exactly the fold test.
    const bearing_set b = bearing_angles({9.025, 13.822, 2.432}, win);
    const double m = 0.5 * (b.alpha[0] + b.alpha[3]);
    CHECK(std::fabs(m + shaping_gamma(m)) > M_PI_2);
  }

  SUBCASE("an impossible box exhausts the attempt budget") {
    monte_carlo_spec bad = spec;
    bad.box_y[0] = 15.5;  // entirely past the plane
    bad.box_y[1] = 16.0;
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(sample_start(rng, bad, win), std::runtime_error);
  }
}

TEST_CASE("stock cases") {
  SUBCASE("noise-free flight from the origin") {
    const run_result r = run_case1();
    CHECK(r.outcome == run_result::status::converged);
    CHECK(r.safe);
    CHECK(r.latched);
    CHECK(r.miss < 0.1);
    CHECK(r.t_T > 23.5);
    CHECK(r.t_T < 32.0);
  }

  SUBCASE("noisy flights cross safely and reproduce by seed") {
    const double sigma = 4.0 * k_deg;
    const run_result a = run_case2(sigma, 1001);
    const run_result b = run_case2(sigma, 1001);
    const run_result c = run_case2(sigma, 1002);
    CHECK(a.outcome == run_result::status::converged);
    CHECK(a.safe);
    CHECK(a.miss < 0.3);
    CHECK(a.t_T == b.t_T);
    CHECK(a.miss == b.miss);
    CHECK(a.t_T != c.t_T);
    CHECK(c.outcome == run_result::status::converged);
    CHECK(c.safe);
  }
}

TEST_CASE("held-command stepping agrees with the smooth integrator") {
  // With zero noise the measured-bearing loop is plain Euler stepping of the
  // same field; at a fine step it must land close to the RK4 reference.
  scenario sc;
  const vec3 start{3.0, 2.0, 5.0};

  std::mt19937_64 rng(1);
  const run_result zoh = run_kinematic_measured(start, sc, 0.001, 0.0, rng, false);

  kinematic_options opt;
  opt.dt = sc.dt_kinematic;
  opt.record_trace = false;
  const run_result smooth = run_kinematic(start, sc.win, sc.guidance, opt);

  REQUIRE(zoh.outcome == run_result::status::converged);
  REQUIRE(smooth.outcome == run_result::status::converged);
  CHECK(zoh.safe);
  CHECK(std::fabs(zoh.t_T - smooth.t_T) <= 0.05);
  CHECK(std::fabs(zoh.crossing.y - sc.win.plane_y) <= 1e-9);
  CHECK(norm(zoh.crossing - smooth.crossing) <= 0.05);

  SUBCASE("wrong-side start is rejected") {
    std::mt19937_64 r2(1);
    CHECK_THROWS_AS(run_kinematic_measured({0.0, 15.5, 0.0}, sc, 0.005, 0.0, r2, false),
                    std::invalid_argument);
  }
}

TEST_CASE("monte carlo batch") {
  monte_carlo_spec spec;
  spec.n_runs = 8;
  spec.sigma_list = {1.0 * k_deg, 4.0 * k_deg};
  spec.master_seed = 42;
  spec.fidelity = fidelity_kind::kinematic;

  SUBCASE("parallel batch is bit-identical to the serial reference") {
    const monte_carlo_stats serial = run_monte_carlo_serial(spec);
    const monte_carlo_stats parallel = run_monte_carlo(spec);

    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
      CHECK(serial.rows[i].sigma == parallel.rows[i].sigma);
      CHECK(serial.rows[i].mean_miss == parallel.rows[i].mean_miss);
      CHECK(serial.rows[i].std_miss == parallel.rows[i].std_miss);
      CHECK(serial.rows[i].success_rate == parallel.rows[i].success_rate);
      CHECK(serial.rows[i].n == parallel.rows[i].n);
      CHECK(serial.rows[i].failures == parallel.rows[i].failures);
    }
    REQUIRE(serial.runs.size() == parallel.runs.size());
    for (std::size_t i = 0; i < serial.runs.size(); ++i) {
      CHECK(serial.runs[i].start.x == parallel.runs[i].start.x);
      CHECK(serial.runs[i].start.y == parallel.runs[i].start.y);
      CHECK(serial.runs[i].start.z == parallel.runs[i].start.z);
      CHECK(serial.runs[i].miss == parallel.runs[i].miss);
      CHECK(serial.runs[i].t_T == parallel.runs[i].t_T);
      CHECK(serial.runs[i].crossed == parallel.runs[i].crossed);
      CHECK(serial.runs[i].success == parallel.runs[i].success);
    }
  }

  SUBCASE("thread count does not change results") {
    monte_carlo_spec one = spec, four = spec;
    one.threads = 1;
    four.threads = 4;
    const monte_carlo_stats a = run_monte_carlo(one);
    const monte_carlo_stats b = run_monte_carlo(four);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      CHECK(a.runs[i].miss == b.runs[i].miss);
      CHECK(a.runs[i].t_T == b.runs[i].t_T);
    }
  }

  SUBCASE("records are ordered and reproducible from the substream hash") {
    spec.n_runs = 3;
    const monte_carlo_stats st = run_monte_carlo(spec);
    REQUIRE(st.runs.size() == 6);
    const window_spec win = default_window();
    for (int si = 0; si < 2; ++si) {
      for (int ri = 0; ri < 3; ++ri) {
        const per_run_record& rec = st.runs[static_cast<std::size_t>(si * 3 + ri)];
        CHECK(rec.sigma_index == si);
        CHECK(rec.run_index == ri);
        std::mt19937_64 rng(mix_seed(42, static_cast<std::uint64_t>(si),
                                     static_cast<std::uint64_t>(ri)));
        const vec3 expect = sample_start(rng, spec, win);
        CHECK(rec.start.x == expect.x);
        CHECK(rec.start.y == expect.y);
        CHECK(rec.start.z == expect.z);
      }
    }
  }

  SUBCASE("repeat calls are deterministic") {
    const monte_carlo_stats a = run_monte_carlo(spec);
    const monte_carlo_stats b = run_monte_carlo(spec);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].mean_miss == b.rows[i].mean_miss);
      CHECK(a.rows[i].std_miss == b.rows[i].std_miss);
    }
  }

  SUBCASE("noise-free runs always succeed; noise degrades accuracy") {
    monte_carlo_spec mc = spec;
    mc.n_runs = 16;
    mc.sigma_list = {0.0, 7.0 * k_deg};
    const monte_carlo_stats st = run_monte_carlo(mc);
    REQUIRE(st.rows.size() == 2);
    CHECK(st.rows[0].success_rate == 1.0);
    CHECK(st.rows[0].failures == 0);
    CHECK(st.rows[0].mean_miss < 0.05);
    CHECK(st.rows[0].mean_miss < st.rows[1].mean_miss);
  }

  SUBCASE("single-run sigma has zero spread") {
    monte_carlo_spec mc = spec;
    mc.n_runs = 1;
    mc.sigma_list = {1.0 * k_deg};
    const monte_carlo_stats st = run_monte_carlo(mc);
    REQUIRE(st.rows.size() == 1);
    CHECK(st.rows[0].std_miss == 0.0);
  }

  SUBCASE("invalid specs are rejected") {
    monte_carlo_spec bad = spec;
    bad.n_runs = 0;
    CHECK_THROWS_AS(run_monte_carlo(bad), std::invalid_argument);
    monte_carlo_spec empty = spec;
    empty.sigma_list.clear();
    CHECK_THROWS_AS(run_monte_carlo_serial(empty), std::invalid_argument);
  }
}
