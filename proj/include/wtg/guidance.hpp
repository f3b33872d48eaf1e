#pragma once

#include "wtg/geometry.hpp"

namespace wtg {

/// sgn with sgn(0) = 0, the continuous completion for the shaping angles.
inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Wrap an angle to [-pi, pi).
double wrap_pi(double a);

struct guidance_config {
  double V = 1.0;                           // [m/s] commanded speed
  double traversal_tol_beta = 0.00872664625997164788;  // [rad] 0.5 deg latch tolerance
  bool use_alternate_vertices = false;      // elevations from e2/e3, azimuths from e4/e3
};

/// @brief Elliptic shaping angle added to the elevation bisector.
/// Zero at bisector 0 and exactly pi/4 in magnitude at bisector +-pi/2.
/// Input must lie in [-pi/2, pi/2].
double shaping_gamma(double bisector_alpha);

/// @brief Elliptic shaping angle added to the azimuth bisector; zero when
/// beta1 + beta2 = pi. Inputs must lie in [0, pi].
double shaping_chi(double beta1, double beta2);

/// Commanded flight-path angle from the two left-edge vertex elevations.
/// Always lands in [-pi/2, pi/2]; the overflow branches fold the commanded
/// direction back across the vertical.
double gamma_des(double alpha1, double alpha4);

/// Commanded heading from the two top-edge vertex azimuths; the sign flips
/// when the flight-path command folds (keeping the horizontal correction
/// pointed at the centroid line). Result wrapped to [-pi, pi).
double chi_des(double beta1, double beta2, double alpha1, double alpha4);

/// True once the azimuth pair is within tol of the traversal geometry
/// (beta1 = pi, beta2 = 0). Callers latch this permanently.
bool traversal_condition(const bearing_set& b, double tol, bool alternate_vertices = false);

struct guidance_command {
  double gamma_des = 0.0;       // [rad]
  double chi_des = 0.0;         // [rad]
  double s_gamma = 0.0;         // [rad] shaping-angle diagnostics
  double s_chi = 0.0;           // [rad]
  vec3 v_des;                   // [m/s] V * (cos g cos c, cos g sin c, sin g)
  bool traversal_latched = false;
};

/// @brief One guidance evaluation: terminal hold (gamma, chi) = (0, pi/2) when
/// latched, otherwise the bearing-driven commands.
guidance_command guidance_step(const bearing_set& b, const guidance_config& cfg, bool latched);

/// Velocity direction for given commands, scaled to speed V.
vec3 desired_velocity(double gamma, double chi, double V);

/// Rectangle-rule integration of the desired position at the guidance rate.
inline vec3 desired_position(const vec3& prev, const vec3& v_des, double dt) {
  return prev + dt * v_des;
}

}  // namespace wtg
