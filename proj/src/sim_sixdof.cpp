#include "wtg/sim_sixdof.hpp"

namespace wtg {

namespace {

constexpr double k_attitude_divergence = 1.53;  // [rad] ~87.7 deg, treat as loss of control
constexpr double k_position_divergence = 1e3;   // [m] distance from the window centroid

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

bool finite(const rigid_body_state& s) {
  return std::isfinite(s.pos.x) && std::isfinite(s.pos.y) && std::isfinite(s.pos.z) &&
         std::isfinite(s.vel.x) && std::isfinite(s.vel.y) && std::isfinite(s.vel.z) &&
         std::isfinite(s.att.x) && std::isfinite(s.att.y) && std::isfinite(s.att.z) &&
         std::isfinite(s.att_rate.x) && std::isfinite(s.att_rate.y) && std::isfinite(s.att_rate.z);
}

rigid_body_state rk4_step(const rigid_body_state& s, const control_inputs& u,
                          const quad_params& p, double h) {
  auto add = [](const rigid_body_state& a, double c, const rigid_body_state& b) {
    rigid_body_state r = a;
    r.pos += c * b.pos;
    r.vel += c * b.vel;
    r.att += c * b.att;
    r.att_rate += c * b.att_rate;
    r.t += c * b.t;
    return r;
  };
  const rigid_body_state k1 = dynamics_deriv(s, u, p);
  const rigid_body_state k2 = dynamics_deriv(add(s, 0.5 * h, k1), u, p);
  const rigid_body_state k3 = dynamics_deriv(add(s, 0.5 * h, k2), u, p);
  const rigid_body_state k4 = dynamics_deriv(add(s, h, k3), u, p);
  rigid_body_state r = add(s, h / 6.0, k1);
  r = add(r, h / 3.0, k2);
  r = add(r, h / 3.0, k3);
  r = add(r, h / 6.0, k4);
  return r;
}

}  // namespace

vec3 body_rates(const vec3& att, const vec3& att_rate) {
  const double cth = std::cos(att.y);
  if (cth == 0.0)
    throw std::domain_error("body_rates: gimbal singularity at |theta| = pi/2");
  const double sph = std::sin(att.x), cph = std::cos(att.x);
  const double sth = std::sin(att.y);
  return {att_rate.x - sth * att_rate.z,
          cph * att_rate.y + sph * cth * att_rate.z,
          -sph * att_rate.y + cph * cth * att_rate.z};
}

rigid_body_state dynamics_deriv(const rigid_body_state& s, const control_inputs& u,
                                const quad_params& p) {
  const double cph = std::cos(s.att.x), sph = std::sin(s.att.x);
  const double cth = std::cos(s.att.y), sth = std::sin(s.att.y);
  const double cps = std::cos(s.att.z), sps = std::sin(s.att.z);

  rigid_body_state d;
  d.pos = s.vel;
  d.vel = {u.u1 * (cph * sth * cps + sph * sps) / p.m,
           u.u1 * (cph * sth * sps - sph * cps) / p.m,
           u.u1 * cph * cth / p.m - p.g};
  d.att = s.att_rate;
  d.att_rate = {u.u2 / p.J_xx, u.u3 / p.J_yy, u.u4 / p.J_zz};
  d.t = 1.0;
  return d;
}

position_controller_out position_controller(const vec3& pos_des, const vec3& vel_des,
                                            const rigid_body_state& s,
                                            const controller_gains& k,
                                            const quad_params& p,
                                            double attitude_limit) {
  position_controller_out out;
  out.u1 = p.m * (p.g + k.K_dz * (vel_des.z - s.vel.z) + k.K_pz * (pos_des.z - s.pos.z));
  if (out.u1 < 0.0) out.u1 = 0.0;

  double a_x = k.K_djx * (vel_des.x - s.vel.x) + k.K_pjx * (pos_des.x - s.pos.x);
  double a_y = k.K_djy * (vel_des.y - s.vel.y) + k.K_pjy * (pos_des.y - s.pos.y);
  if (k.use_position_feedforward) {
    a_x += k.K_dx * (vel_des.x - s.vel.x) + k.K_px * (pos_des.x - s.pos.x);
    a_y += k.K_dy * (vel_des.y - s.vel.y) + k.K_py * (pos_des.y - s.pos.y);
  }
  const double cps = std::cos(s.att.z), sps = std::sin(s.att.z);
  out.att_cmd.theta_c = clamp((a_x * cps + a_y * sps) / p.g, -attitude_limit, attitude_limit);
  out.att_cmd.phi_c = clamp((a_x * sps - a_y * cps) / p.g, -attitude_limit, attitude_limit);
  out.att_cmd.psi_c = 0.0;
  return out;
}

void attitude_controller(const attitude_command& cmd, const rigid_body_state& s,
                         const controller_gains& k, control_inputs& u) {
  const vec3 pqr = body_rates(s.att, s.att_rate);
  u.u2 = k.K_dphi * (cmd.p_c - pqr.x) + k.K_pphi * (cmd.phi_c - s.att.x);
  u.u3 = k.K_dtheta * (cmd.q_c - pqr.y) + k.K_ptheta * (cmd.theta_c - s.att.y);
  u.u4 = k.K_dpsi * (cmd.r_c - pqr.z) + k.K_ppsi * (cmd.psi_c - s.att.z);
}

run_result run_sixdof(const rigid_body_state& start, const window_spec& win,
                      const guidance_config& cfg, const controller_gains& gains,
                      const quad_params& params, const sixdof_options& opt,
                      std::mt19937_64* noise_rng) {
  if (!(start.pos.y < win.plane_y))
    throw std::invalid_argument("run_sixdof: start must lie on the approach side");
  if (opt.sigma > 0.0 && noise_rng == nullptr)
    throw std::invalid_argument("run_sixdof: bearing noise requires an RNG");

  run_result res;
  res.max_w_dot = -std::numeric_limits<double>::infinity();
  std::normal_distribution<double> gauss(0.0, opt.sigma > 0.0 ? opt.sigma : 1.0);

  rigid_body_state s = start;
  vec3 p_des = start.pos;
  bool latched = false;
  bool have_att_prev = false;
  attitude_command att_prev;
  double w_prev = 0.0, d_prev = 0.0;
  bool have_w_prev = false;

  while (s.t < opt.t_max) {
    bearing_set meas = bearing_angles(s.pos, win);
    if (opt.sigma > 0.0) {
      for (int i = 0; i < 4; ++i)
        meas.alpha[i] = clamp(meas.alpha[i] + gauss(*noise_rng), -M_PI_2, M_PI_2);
      for (int i = 0; i < 4; ++i)
        meas.beta[i] = clamp(meas.beta[i] + gauss(*noise_rng), 0.0, M_PI);
    }
    if (!latched && traversal_condition(meas, cfg.traversal_tol_beta, cfg.use_alternate_vertices)) {
      latched = true;
      res.latched = true;
    }
    const guidance_command cmd = guidance_step(meas, cfg, latched);

    position_controller_out pc =
        position_controller(p_des, cmd.v_des, s, gains, params, opt.attitude_limit);
    // Commanded attitude rates: backward difference of the saturated attitude
    // commands, mapped to body axes. Zero on the first step.
    if (have_att_prev) {
      const vec3 rate_c = {(pc.att_cmd.phi_c - att_prev.phi_c) / opt.dt,
                           (pc.att_cmd.theta_c - att_prev.theta_c) / opt.dt,
                           (pc.att_cmd.psi_c - att_prev.psi_c) / opt.dt};
      const vec3 pqr_c = body_rates({pc.att_cmd.phi_c, pc.att_cmd.theta_c, pc.att_cmd.psi_c}, rate_c);
      pc.att_cmd.p_c = pqr_c.x;
      pc.att_cmd.q_c = pqr_c.y;
      pc.att_cmd.r_c = pqr_c.z;
    }
    att_prev = pc.att_cmd;
    have_att_prev = true;

    control_inputs u;
    u.u1 = pc.u1;
    attitude_controller(pc.att_cmd, s, gains, u);

    if (opt.record_trace) {
      trajectory_sample smp;
      smp.t = s.t;
      smp.pos = s.pos;
      smp.vel = s.vel;
      smp.att = s.att;
      smp.bearings = meas;
      smp.gamma_des = cmd.gamma_des;
      smp.chi_des = cmd.chi_des;
      smp.s_gamma = cmd.s_gamma;
      smp.s_chi = cmd.s_chi;
      const displacement_state disp = displacements(s.pos, win);
      smp.D_x = disp.D_x;
      smp.D_z = disp.D_z;
      const lyapunov_sample ly = lyapunov(disp, cmd.gamma_des, cmd.chi_des, cfg.V, s.t);
      smp.W = ly.W;
      smp.W_dot = ly.W_dot;
      res.trace.push_back(smp);
    }
    if (!latched) {
      const displacement_state disp = displacements(s.pos, win);
      const lyapunov_sample ly = lyapunov(disp, cmd.gamma_des, cmd.chi_des, cfg.V, s.t);
      if (have_w_prev && d_prev > 1e-6 && !(ly.W < w_prev)) ++res.w_violations;
      if (disp.D > 1e-6 && ly.W_dot > res.max_w_dot) res.max_w_dot = ly.W_dot;
      w_prev = ly.W;
      d_prev = disp.D;
      have_w_prev = true;
    }

    rigid_body_state next = rk4_step(s, u, params, opt.dt);
    if (next.pos.y >= win.plane_y) {
      double lo = 0.0, hi = opt.dt;
      for (int it = 0; it < 200 && hi - lo > 1e-16 * opt.dt; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rk4_step(s, u, params, mid).pos.y >= win.plane_y ? hi : lo) = mid;
      }
      next = rk4_step(s, u, params, hi);
      res.crossed = true;
      res.t_T = next.t;
      res.crossing = next.pos;
      res.miss = std::hypot(next.pos.x - win.centroid.x, next.pos.z - win.centroid.z);
      res.safe = std::abs(next.pos.x - win.centroid.x) < 0.5 * win.width_a &&
                 std::abs(next.pos.z - win.centroid.z) < 0.5 * win.height_b;
      res.outcome = run_result::status::converged;
      return res;
    }

    p_des = desired_position(p_des, cmd.v_des, opt.dt);
    s = next;

    if (!finite(s)) {
      res.outcome = run_result::status::diverged;
      res.diagnostic = "non-finite state";
      return res;
    }
    if (std::abs(s.att.x) > k_attitude_divergence || std::abs(s.att.y) > k_attitude_divergence) {
      res.outcome = run_result::status::diverged;
      res.diagnostic = "attitude blowup";
      return res;
    }
    if (norm(s.pos - win.centroid) > k_position_divergence) {
      res.outcome = run_result::status::diverged;
      res.diagnostic = "position runaway";
      return res;
    }

    const double track_err = norm(s.pos - p_des);
    if (s.t > 5.0 && track_err > res.max_tracking_err) res.max_tracking_err = track_err;
    if (std::abs(s.att.x) > res.max_abs_roll) res.max_abs_roll = std::abs(s.att.x);
    if (std::abs(s.att.y) > res.max_abs_pitch) res.max_abs_pitch = std::abs(s.att.y);
  }
  res.outcome = run_result::status::non_converged;
  return res;
}

}  // namespace wtg
