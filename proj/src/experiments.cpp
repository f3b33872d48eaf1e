#include "wtg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wtg {

namespace {

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t sigma_index, std::uint64_t run_index) {
  std::uint64_t x = splitmix64(master + 0x9E3779B97F4A7C15ULL * (sigma_index + 1));
  x = splitmix64(x ^ (0xBF58476D1CE4E5B9ULL * (run_index + 1)));
  return x;
}

bearing_set corrupt_bearings(const bearing_set& truth, double sigma, std::mt19937_64& rng) {
  if (sigma == 0.0) return truth;
  std::normal_distribution<double> gauss(0.0, sigma);
  bearing_set out = truth;
  for (int i = 0; i < 4; ++i) out.alpha[i] = clamp(truth.alpha[i] + gauss(rng), -M_PI_2, M_PI_2);
  for (int i = 0; i < 4; ++i) out.beta[i] = clamp(truth.beta[i] + gauss(rng), 0.0, M_PI);
  return out;
}

run_result run_case1(const scenario& sc) {
  rigid_body_state start;
  start.pos = {0.0, 0.0, 0.0};
  sixdof_options opt;
  opt.dt = sc.dt_sixdof;
  opt.t_max = sc.t_max;
  return run_sixdof(start, sc.win, sc.guidance, sc.gains, sc.params, opt);
}

run_result run_case2(double sigma, std::uint64_t seed, const scenario& sc) {
  rigid_body_state start;
  start.pos = {0.0, 0.0, 0.0};
  sixdof_options opt;
  opt.dt = sc.dt_sixdof;
  opt.t_max = sc.t_max;
  opt.sigma = sigma;
  std::mt19937_64 rng(mix_seed(seed, 0, 0));
  return run_sixdof(start, sc.win, sc.guidance, sc.gains, sc.params, opt,
                    sigma > 0.0 ? &rng : nullptr);
}

run_result run_kinematic_measured(const vec3& start, const scenario& sc,
                                  double dt, double sigma, std::mt19937_64& rng,
                                  bool record_trace) {
  const window_spec& win = sc.win;
  if (!(start.y < win.plane_y))
    throw std::invalid_argument("run_kinematic_measured: start must lie on the approach side");

  run_result res;
  res.max_w_dot = -std::numeric_limits<double>::infinity();
  vec3 p = start;
  double t = 0.0;
  bool latched = false;
  double w_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;

  while (t < sc.t_max) {
    const bearing_set truth = bearing_angles(p, win);
    const bearing_set meas = corrupt_bearings(truth, sigma, rng);
    if (!latched &&
        traversal_condition(meas, sc.guidance.traversal_tol_beta, sc.guidance.use_alternate_vertices)) {
      latched = true;
      res.latched = true;
    }
    const guidance_command cmd = guidance_step(meas, sc.guidance, latched);

    if (record_trace) {
      trajectory_sample smp;
      smp.t = t;
      smp.pos = p;
      smp.vel = cmd.v_des;
      smp.bearings = meas;
      smp.gamma_des = cmd.gamma_des;
      smp.chi_des = cmd.chi_des;
      smp.s_gamma = cmd.s_gamma;
      smp.s_chi = cmd.s_chi;
      const displacement_state disp = displacements(p, win);
      smp.D_x = disp.D_x;
      smp.D_z = disp.D_z;
      const lyapunov_sample ly = lyapunov(disp, cmd.gamma_des, cmd.chi_des, sc.guidance.V, t);
      smp.W = ly.W;
      smp.W_dot = ly.W_dot;
      res.trace.push_back(smp);
    }
    if (!latched) {
      const displacement_state disp = displacements(p, win);
      const lyapunov_sample ly = lyapunov(disp, cmd.gamma_des, cmd.chi_des, sc.guidance.V, t);
      if (have_prev && d_prev > 1e-6 && !(ly.W < w_prev)) ++res.w_violations;
      if (disp.D > 1e-6 && ly.W_dot > res.max_w_dot) res.max_w_dot = ly.W_dot;
      w_prev = ly.W;
      d_prev = disp.D;
      have_prev = true;
    }

    // Held command: the step is an exact translation, and the plane crossing
    // within the step has a closed form.
    const vec3 v = cmd.v_des;
    if (v.y > 0.0 && p.y + v.y * dt >= win.plane_y) {
      const double h = (win.plane_y - p.y) / v.y;
      p += h * v;
      t += h;
      res.crossed = true;
      res.t_T = t;
      res.crossing = p;
      res.miss = std::hypot(p.x - win.centroid.x, p.z - win.centroid.z);
      res.safe = std::abs(p.x - win.centroid.x) < 0.5 * win.width_a &&
                 std::abs(p.z - win.centroid.z) < 0.5 * win.height_b;
      res.outcome = run_result::status::converged;
      return res;
    }
    p += dt * v;
    t += dt;
  }
  res.outcome = run_result::status::non_converged;
  return res;
}

vec3 sample_start(std::mt19937_64& rng, const monte_carlo_spec& spec, const window_spec& win) {
  std::uniform_real_distribution<double> ux(spec.box_x[0], spec.box_x[1]);
  std::uniform_real_distribution<double> uy(spec.box_y[0], spec.box_y[1]);
  std::uniform_real_distribution<double> uz(spec.box_z[0], spec.box_z[1]);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const vec3 p{ux(rng), uy(rng), uz(rng)};
    if (!(p.y < win.plane_y)) continue;  // wrong side of the window plane
    bearing_set b;
    try {
      b = bearing_angles(p, win);
    } catch (const std::domain_error&) {
      continue;  // degenerate (on a vertex)
    }
    const double m = 0.5 * (b.alpha[0] + b.alpha[3]);
    const double u = m + shaping_gamma(m);
    if (std::abs(u) > M_PI_2) continue;  // commanded climb folds past vertical
    return p;
  }
  throw std::runtime_error("sample_start: no usable start found in the configured box");
}

namespace {

per_run_record execute_run(const monte_carlo_spec& spec, const scenario& sc,
                           int sigma_index, int run_index) {
  per_run_record rec;
  rec.sigma_index = sigma_index;
  rec.run_index = run_index;
  std::mt19937_64 rng(mix_seed(spec.master_seed,
                               static_cast<std::uint64_t>(sigma_index),
                               static_cast<std::uint64_t>(run_index)));
  rec.start = sample_start(rng, spec, sc.win);
  const double sigma = spec.sigma_list[static_cast<std::size_t>(sigma_index)];

  run_result r;
  if (spec.fidelity == fidelity_kind::sixdof) {
    rigid_body_state s0;
    s0.pos = rec.start;
    sixdof_options opt;
    opt.dt = sc.dt_sixdof;
    opt.t_max = sc.t_max;
    opt.sigma = sigma;
    opt.record_trace = false;
    r = run_sixdof(s0, sc.win, sc.guidance, sc.gains, sc.params, opt,
                   sigma > 0.0 ? &rng : nullptr);
  } else if (sigma > 0.0) {
    r = run_kinematic_measured(rec.start, sc, sc.dt_kinematic, sigma, rng, false);
  } else {
    kinematic_options opt;
    opt.dt = sc.dt_kinematic;
    opt.t_max = sc.t_max;
    opt.record_trace = false;
    r = run_kinematic(rec.start, sc.win, sc.guidance, opt);
  }
  rec.crossed = r.crossed;
  rec.miss = r.miss;
  rec.t_T = r.t_T;
  rec.success = r.crossed && r.safe;
  rec.outcome = r.outcome;
  return rec;
}

monte_carlo_stats reduce(const monte_carlo_spec& spec, std::vector<per_run_record> runs) {
  monte_carlo_stats out;
  const int n_sigma = static_cast<int>(spec.sigma_list.size());
  out.rows.reserve(static_cast<std::size_t>(n_sigma));
  for (int si = 0; si < n_sigma; ++si) {
    sigma_stats st;
    st.sigma = spec.sigma_list[static_cast<std::size_t>(si)];
    st.n = spec.n_runs;
    double sum = 0.0;
    int crossed = 0, successes = 0;
    for (int ri = 0; ri < spec.n_runs; ++ri) {
      const per_run_record& rec = runs[static_cast<std::size_t>(si * spec.n_runs + ri)];
      if (rec.crossed) {
        sum += rec.miss;
        ++crossed;
      }
      if (rec.success) ++successes;
    }
    st.failures = spec.n_runs - crossed;
    st.success_rate = static_cast<double>(successes) / spec.n_runs;
    if (crossed > 0) {
      st.mean_miss = sum / crossed;
      double ss = 0.0;
      for (int ri = 0; ri < spec.n_runs; ++ri) {
        const per_run_record& rec = runs[static_cast<std::size_t>(si * spec.n_runs + ri)];
        if (rec.crossed) {
          const double d = rec.miss - st.mean_miss;
          ss += d * d;
        }
      }
      st.std_miss = crossed > 1 ? std::sqrt(ss / (crossed - 1)) : 0.0;
    }
    out.rows.push_back(st);
  }
  out.runs = std::move(runs);
  return out;
}

void validate_spec(const monte_carlo_spec& spec) {
  if (spec.n_runs < 1) throw std::invalid_argument("monte_carlo_spec: n_runs must be >= 1");
  if (spec.sigma_list.empty())
    throw std::invalid_argument("monte_carlo_spec: sigma_list must be non-empty");
}

}  // namespace

monte_carlo_stats run_monte_carlo_serial(const monte_carlo_spec& spec, const scenario& sc) {
  validate_spec(spec);
  const int total = static_cast<int>(spec.sigma_list.size()) * spec.n_runs;
  std::vector<per_run_record> runs(static_cast<std::size_t>(total));
  for (int idx = 0; idx < total; ++idx)
    runs[static_cast<std::size_t>(idx)] = execute_run(spec, sc, idx / spec.n_runs, idx % spec.n_runs);
  return reduce(spec, std::move(runs));
}

monte_carlo_stats run_monte_carlo(const monte_carlo_spec& spec, const scenario& sc) {
  validate_spec(spec);
  const int total = static_cast<int>(spec.sigma_list.size()) * spec.n_runs;
  std::vector<per_run_record> runs(static_cast<std::size_t>(total));
#ifdef _OPENMP
  const int threads = spec.threads > 0 ? spec.threads : omp_get_max_threads();
#pragma omp parallel for num_threads(threads)
  for (int idx = 0; idx < total; ++idx)
    runs[static_cast<std::size_t>(idx)] = execute_run(spec, sc, idx / spec.n_runs, idx % spec.n_runs);
#else
  for (int idx = 0; idx < total; ++idx)
    runs[static_cast<std::size_t>(idx)] = execute_run(spec, sc, idx / spec.n_runs, idx % spec.n_runs);
#endif
  return reduce(spec, std::move(runs));
}

}  // namespace wtg
