#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "wtg/guidance.hpp"
#include "wtg/run_result.hpp"

namespace wtg {

struct quad_params {
  double m = 0.47;      // [kg]
  double J_xx = 0.0086; // [kg m^2]
  double J_yy = 0.0086; // [kg m^2]
  double J_zz = 0.0176; // [kg m^2]
  double g = 9.81;      // [m/s^2]
};

struct controller_gains {
  // Altitude loop (thrust).
  double K_pz = 3.8, K_dz = 3.5;
  // Horizontal position loops: the j-pairs drive the commanded accelerations;
  // the plain x/y pairs are an optional feedforward path, inactive by default.
  double K_pjx = 6.0, K_djx = 3.5;
  double K_pjy = 12.7, K_djy = 4.2;
  double K_px = 6.0, K_dx = 3.5;
  double K_py = 12.7, K_dy = 4.2;
  bool use_position_feedforward = false;
  // Attitude loops (moments).
  double K_pphi = 12.8, K_dphi = 0.5;
  double K_ptheta = 1.8, K_dtheta = 0.2;
  double K_ppsi = 2.0, K_dpsi = 0.5;
};

/// @brief Rigid-body state. Attitude follows the roll-pitch-yaw Euler
/// convention; att_rate holds the Euler-angle rates (the rotational dynamics
/// act on these directly), with body rates available through body_rates().
struct rigid_body_state {
  vec3 pos;       // [m]
  vec3 vel;       // [m/s]
  vec3 att;       // [rad] (phi, theta, psi)
  vec3 att_rate;  // [rad/s] (phi_dot, theta_dot, psi_dot)
  double t = 0.0; // [s]
};

/// Euler-angle rates -> body rates (p, q, r). Throws std::domain_error at
/// the |theta| = pi/2 gimbal singularity.
vec3 body_rates(const vec3& att, const vec3& att_rate);

struct control_inputs {
  double u1 = 0.0;  // [N]   total thrust, >= 0
  double u2 = 0.0;  // [N m] roll moment
  double u3 = 0.0;  // [N m] pitch moment
  double u4 = 0.0;  // [N m] yaw moment
};

/// Rigid-body state derivative under held control inputs.
rigid_body_state dynamics_deriv(const rigid_body_state& s, const control_inputs& u,
                                const quad_params& p);

struct attitude_command {
  double phi_c = 0.0, theta_c = 0.0, psi_c = 0.0;  // [rad], saturated
  double p_c = 0.0, q_c = 0.0, r_c = 0.0;          // [rad/s]
};

/// Outer position/velocity loop: thrust plus saturated attitude commands.
/// Rate commands are filled by the caller (backward difference across steps).
struct position_controller_out {
  double u1 = 0.0;
  attitude_command att_cmd;
};
position_controller_out position_controller(const vec3& pos_des, const vec3& vel_des,
                                            const rigid_body_state& s,
                                            const controller_gains& k,
                                            const quad_params& p,
                                            double attitude_limit);

/// Inner attitude loop -> moments.
void attitude_controller(const attitude_command& cmd, const rigid_body_state& s,
                         const controller_gains& k, control_inputs& u);

struct sixdof_options {
  double dt = 0.002;        // [s]
  double t_max = 120.0;     // [s]
  double attitude_limit = 0.3490658503988659;  // [rad] 20 deg command saturation
  double sigma = 0.0;       // [rad] bearing-noise standard deviation
  bool record_trace = true;
};

/// @brief Closed-loop 6-DOF run: per step, measure (optionally noisy)
/// bearings, evaluate guidance, advance the desired position, run the
/// cascaded PD controller, then one RK4 step of the rigid-body dynamics with
/// controls held. The final step is shrunk by bisection to land on the window
/// plane. noise_rng must be non-null when opt.sigma > 0.
run_result run_sixdof(const rigid_body_state& start, const window_spec& win,
                      const guidance_config& cfg, const controller_gains& gains,
                      const quad_params& params, const sixdof_options& opt,
                      std::mt19937_64* noise_rng = nullptr);

}  // namespace wtg
