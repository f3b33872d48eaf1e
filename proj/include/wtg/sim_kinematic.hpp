#pragma once

#include <limits>

#include "wtg/guidance.hpp"
#include "wtg/run_result.hpp"

namespace wtg {

struct kinematic_options {
  double dt = 0.005;        // [s]
  double t_max = 200.0;     // [s]
  bool latch_enabled = true;
  bool record_trace = true;
  // Stop surface y-coordinate; NaN means the window plane. Letting tests stop
  // at a parallel section short of the plane keeps the integrated field smooth
  // for convergence-order measurements.
  double stop_y = std::numeric_limits<double>::quiet_NaN();
};

/// @brief Point-mass closed loop: position integrated with classical RK4 on
/// the bearing-driven commanded velocity, commands re-evaluated at every
/// integrator stage. The final step is shrunk by bisection so the last sample
/// lands on the stop surface to machine precision.
run_result run_kinematic(const vec3& start, const window_spec& win,
                         const guidance_config& cfg, const kinematic_options& opt);

/// Angle-space initial condition for phase portraits. The position is
/// reconstructed from (beta1, beta2, alpha1); alpha4 must be consistent
/// with that position.
struct angle_ic {
  double alpha1 = 0.0;  // [rad]
  double alpha4 = 0.0;  // [rad]
  double beta1 = 0.0;   // [rad]
  double beta2 = 0.0;   // [rad]
};

/// Triangulates the unique position with the given bearings. Throws
/// std::invalid_argument when no consistent approach-side position exists
/// (needs beta1 > beta2, both interior to (0, pi), and a matching alpha4).
vec3 position_from_angles(const angle_ic& ic, const window_spec& win);

struct phase_portrait {
  enum class plane_kind { alpha1_alpha4, beta1_beta2 };

  struct point {
    double t = 0.0;        // [s]
    double angle_a = 0.0;  // [deg]
    double angle_b = 0.0;  // [deg]
  };

  plane_kind plane = plane_kind::alpha1_alpha4;
  std::vector<std::vector<point>> trajectories;
  double equilibrium_a = 0.0;  // [deg]
  double equilibrium_b = 0.0;  // [deg]
};

phase_portrait make_phase_portrait(phase_portrait::plane_kind plane,
                                   const std::vector<angle_ic>& ics,
                                   const window_spec& win,
                                   const guidance_config& cfg,
                                   const kinematic_options& opt);

/// Deterministic 11-point spread over the bearing-angle ranges used for the
/// stock portraits; every one converges to the traversal geometry.
std::vector<angle_ic> default_phase_ics();

}  // namespace wtg
