#include "wtg/sim_kinematic.hpp"

namespace wtg {

namespace {

constexpr double k_monitor_floor = 1e-6;  // [m] displacement below which W is not monitored

vec3 command_velocity(const vec3& p, const window_spec& win,
                      const guidance_config& cfg, bool latched) {
  if (latched) return desired_velocity(0.0, M_PI_2, cfg.V);
  const bearing_set b = bearing_angles_continued(p, win);
  const guidance_command cmd = guidance_step(b, cfg, false);
  return cmd.v_des;
}

vec3 rk4_step(const vec3& p, double h, const window_spec& win,
              const guidance_config& cfg, bool latched) {
  const vec3 k1 = command_velocity(p, win, cfg, latched);
  const vec3 k2 = command_velocity(p + (0.5 * h) * k1, win, cfg, latched);
  const vec3 k3 = command_velocity(p + (0.5 * h) * k2, win, cfg, latched);
  const vec3 k4 = command_velocity(p + h * k3, win, cfg, latched);
  return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

trajectory_sample make_sample(double t, const vec3& p, const window_spec& win,
                              const guidance_config& cfg, bool latched) {
  trajectory_sample s;
  s.t = t;
  s.pos = p;
  s.bearings = bearing_angles_continued(p, win);
  const guidance_command cmd = guidance_step(s.bearings, cfg, latched);
  s.vel = cmd.v_des;
  s.gamma_des = cmd.gamma_des;
  s.chi_des = cmd.chi_des;
  s.s_gamma = cmd.s_gamma;
  s.s_chi = cmd.s_chi;
  const displacement_state d = displacements(p, win);
  s.D_x = d.D_x;
  s.D_z = d.D_z;
  const lyapunov_sample ly = lyapunov(d, cmd.gamma_des, cmd.chi_des, cfg.V, t);
  s.W = ly.W;
  s.W_dot = ly.W_dot;
  return s;
}

}  // namespace

run_result run_kinematic(const vec3& start, const window_spec& win,
                         const guidance_config& cfg, const kinematic_options& opt) {
  const double stop_y = std::isnan(opt.stop_y) ? win.plane_y : opt.stop_y;
  if (!(start.y < stop_y))
    throw std::invalid_argument("run_kinematic: start must lie on the approach side");

  run_result res;
  res.max_w_dot = -std::numeric_limits<double>::infinity();

  vec3 p = start;
  double t = 0.0;
  bool latched = false;
  double w_prev = 0.0, d_prev = 0.0;
  bool have_prev = false;

  auto observe = [&](double tk, const vec3& pk) {
    const trajectory_sample s = make_sample(tk, pk, win, cfg, latched);
    // Monitor the convergence function on pre-latch samples only; the
    // terminal hold translates the vehicle without steering, so W is flat
    // there by construction.
    if (!latched) {
      const double d_now = std::hypot(s.D_x, s.D_z);
      if (have_prev && d_prev > k_monitor_floor && !(s.W < w_prev)) ++res.w_violations;
      if (d_now > k_monitor_floor && s.W_dot > res.max_w_dot) res.max_w_dot = s.W_dot;
      w_prev = s.W;
      d_prev = d_now;
      have_prev = true;
    }
    if (opt.record_trace) res.trace.push_back(s);
  };

  while (t < opt.t_max) {
    if (opt.latch_enabled && !latched &&
        traversal_condition(bearing_angles_continued(p, win), cfg.traversal_tol_beta,
                            cfg.use_alternate_vertices)) {
      latched = true;
      res.latched = true;
    }
    observe(t, p);

    const vec3 p_next = rk4_step(p, opt.dt, win, cfg, latched);
    if (p_next.y >= stop_y) {
      // Shrink the final step until it lands on the stop surface: bisection
      // on the step size, which keeps the landing a genuine RK4 step.
      double lo = 0.0, hi = opt.dt;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * opt.dt; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rk4_step(p, mid, win, cfg, latched).y >= stop_y ? hi : lo) = mid;
      }
      p = rk4_step(p, hi, win, cfg, latched);
      t += hi;
      observe(t, p);
      res.crossed = true;
      res.t_T = t;
      res.crossing = p;
      res.miss = std::hypot(p.x - win.centroid.x, p.z - win.centroid.z);
      res.safe = std::abs(p.x - win.centroid.x) < 0.5 * win.width_a &&
                 std::abs(p.z - win.centroid.z) < 0.5 * win.height_b;
      res.outcome = run_result::status::converged;
      return res;
    }
    p = p_next;
    t += opt.dt;
  }
  res.outcome = run_result::status::non_converged;
  return res;
}

vec3 position_from_angles(const angle_ic& ic, const window_spec& win) {
  const double b1 = ic.beta1, b2 = ic.beta2;
  if (!(b1 > 0.0 && b1 < M_PI && b2 > 0.0 && b2 < M_PI) || !(b1 > b2))
    throw std::invalid_argument(
        "position_from_angles: needs interior azimuths with beta1 > beta2 for an approach-side fix");
  const double cot1 = std::cos(b1) / std::sin(b1);
  const double cot2 = std::cos(b2) / std::sin(b2);
  const double dy = win.width_a / (cot2 - cot1);
  if (!(dy > 0.0) || !std::isfinite(dy))
    throw std::invalid_argument("position_from_angles: azimuth pair places the vehicle off the approach side");

  vec3 p;
  p.y = win.plane_y - dy;
  p.x = win.e1.x - dy * cot1;
  if (std::abs(ic.alpha1) >= M_PI_2)
    throw std::invalid_argument("position_from_angles: alpha1 must be interior to (-pi/2, pi/2)");
  const double r_xy1 = std::hypot(win.e1.x - p.x, dy);
  p.z = win.e1.z - r_xy1 * std::tan(ic.alpha1);

  // The fourth angle is determined by the other three; reject inconsistent sets.
  const bearing_set b = bearing_angles(p, win);
  if (std::abs(b.alpha[3] - ic.alpha4) > 0.004)
    throw std::invalid_argument("position_from_angles: alpha4 inconsistent with the position fixed by (beta1, beta2, alpha1)");
  return p;
}

phase_portrait make_phase_portrait(phase_portrait::plane_kind plane,
                                   const std::vector<angle_ic>& ics,
                                   const window_spec& win,
                                   const guidance_config& cfg,
                                   const kinematic_options& opt) {
  phase_portrait pp;
  pp.plane = plane;
  if (plane == phase_portrait::plane_kind::alpha1_alpha4) {
    pp.equilibrium_a = 36.87;
    pp.equilibrium_b = -36.87;
  } else {
    pp.equilibrium_a = 180.0;
    pp.equilibrium_b = 0.0;
  }

  kinematic_options run_opt = opt;
  run_opt.record_trace = true;
  constexpr double rad2deg = 180.0 / M_PI;
  for (const angle_ic& ic : ics) {
    const vec3 start = position_from_angles(ic, win);
    const run_result r = run_kinematic(start, win, cfg, run_opt);
    std::vector<phase_portrait::point> path;
    path.reserve(r.trace.size());
    for (const trajectory_sample& s : r.trace) {
      phase_portrait::point q;
      q.t = s.t;
      if (plane == phase_portrait::plane_kind::alpha1_alpha4) {
        q.angle_a = s.bearings.alpha[0] * rad2deg;
        q.angle_b = s.bearings.alpha[3] * rad2deg;
      } else {
        q.angle_a = s.bearings.beta[0] * rad2deg;
        q.angle_b = s.bearings.beta[1] * rad2deg;
      }
      path.push_back(q);
    }
    pp.trajectories.push_back(std::move(path));
  }
  return pp;
}

std::vector<angle_ic> default_phase_ics() {
  // Eleven deterministic spreads over alpha in (-pi/2, pi/2) and beta in
  // (0, pi); each alpha4 is the one implied by the (beta1, beta2, alpha1)
  // triangulation, rounded to hundredths of a degree.
  constexpr double deg = M_PI / 180.0;
  const double table[11][4] = {
      // alpha1, alpha4, beta1, beta2  [deg]
      {36.82, 21.96, 54.77, 38.21},
      {-60.0, -63.35, 120.0, 100.0},
      {70.0, 69.09, 95.0, 85.0},
      {-75.0, -77.42, 60.0, 30.0},
      {50.0, 46.48, 80.0, 70.0},
      {20.0, 9.17, 150.0, 140.0},
      {-40.0, -49.51, 40.0, 28.0},
      {-10.0, -20.36, 110.0, 95.0},
      {10.0, -3.47, 70.0, 55.0},
      {40.0, 26.65, 135.0, 110.0},
      {-65.0, -68.28, 85.0, 60.0},
  };
  std::vector<angle_ic> ics;
  ics.reserve(11);
  for (const auto& r : table)
    ics.push_back({r[0] * deg, r[1] * deg, r[2] * deg, r[3] * deg});
  return ics;
}

}  // namespace wtg
