#pragma once

#include <string>
#include <vector>

#include "wtg/geometry.hpp"

namespace wtg {

/// One trajectory row; attitude fields stay zero at kinematic fidelity.
struct trajectory_sample {
  double t = 0.0;        // [s]
  vec3 pos;              // [m]
  vec3 vel;              // [m/s]
  vec3 att;              // [rad] (phi, theta, psi)
  double gamma_des = 0.0;  // [rad]
  double chi_des = 0.0;    // [rad]
  bearing_set bearings;    // bearings driving the guidance (measured when noise is on)
  double s_gamma = 0.0;    // [rad]
  double s_chi = 0.0;      // [rad]
  double D_x = 0.0;        // [m]
  double D_z = 0.0;        // [m]
  double W = 0.0;          // [m^2]
  double W_dot = 0.0;      // [m^2/s]
};

struct run_result {
  enum class status { converged, non_converged, diverged };

  status outcome = status::non_converged;
  std::string diagnostic;        // set for diverged runs
  double t_T = 0.0;              // [s] plane-crossing time (valid when crossed)
  bool crossed = false;
  vec3 crossing;                 // [m] position at the plane crossing
  double miss = 0.0;             // [m] distance from the window centroid at crossing
  bool safe = false;             // crossing inside the window rectangle
  bool latched = false;          // terminal hold engaged before the crossing
  int w_violations = 0;          // monitored samples where W failed to decrease
  double max_w_dot = 0.0;        // largest commanded W-rate over monitored samples
  double max_tracking_err = 0.0; // [m] worst |pos - desired pos| (6-DOF only)
  double max_abs_roll = 0.0;     // [rad] (6-DOF only)
  double max_abs_pitch = 0.0;    // [rad] (6-DOF only)
  std::vector<trajectory_sample> trace;
};

}  // namespace wtg
