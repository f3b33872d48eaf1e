#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace wtg {

struct vec3 {
  double x = 0.0;  // [m] (or [m/s] when used as a velocity)
  double y = 0.0;
  double z = 0.0;
};

inline vec3 operator+(const vec3& a, const vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline vec3 operator-(const vec3& a, const vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline vec3 operator*(double s, const vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline vec3& operator+=(vec3& a, const vec3& b) { a.x += b.x; a.y += b.y; a.z += b.z; return a; }
inline double dot(const vec3& a, const vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const vec3& a) { return std::sqrt(dot(a, a)); }

/// @brief Rectangular window in the world frame, vertices ordered as seen from
/// the approach side: e1 top-left, e2 top-right, e3 bottom-right, e4 bottom-left.
/// The window plane is parallel to the x_w-z_w plane (all vertices share one y).
struct window_spec {
  vec3 e1, e2, e3, e4;
  double width_a = 0.0;   // [m] |e1-e2|
  double height_b = 0.0;  // [m] |e1-e4|
  vec3 centroid;
  vec3 normal;            // +y_w unit vector, pointing through the window
  double plane_y = 0.0;   // [m] common y of the vertices

  /// Validates coplanarity, rectangle shape, and vertex ordering; throws
  /// std::invalid_argument naming the violated invariant.
  static window_spec from_vertices(const vec3& e1, const vec3& e2, const vec3& e3, const vec3& e4);
};

/// 4 m x 3 m window centered at (14, 15, 11.5), the default scenario geometry.
window_spec default_window();

/// @brief Elevation (alpha) and azimuth (beta) of the four window vertices as
/// seen from the vehicle. alpha in [-pi/2, pi/2], beta in [0, pi]; index i
/// corresponds to vertex e_{i+1}.
struct bearing_set {
  std::array<double, 4> alpha{};  // [rad]
  std::array<double, 4> beta{};   // [rad]
};

/// @brief Strict bearing computation for approach-side positions.
/// Throws std::domain_error if the vehicle is past the window plane
/// (range violation: beta would leave [0, pi]) or within 1e-6 m of a vertex
/// (degenerate geometry).
bearing_set bearing_angles(const vec3& pos, const window_spec& win);

/// Bearing computation with the azimuth analytically continued across the
/// window plane, so integrator stages may poke slightly past it. Agrees with
/// bearing_angles() on the approach side.
bearing_set bearing_angles_continued(const vec3& pos, const window_spec& win);

/// Slant ranges R_i from the vehicle to the four vertices. [m]
std::array<double, 4> vertex_ranges(const vec3& pos, const window_spec& win);

/// @brief Spherical relative-motion state of one vertex line of sight:
/// closing speed and the angular-rate components implied by flying at speed V
/// with flight-path angle gamma and heading chi.
struct relative_state {
  double V_R = 0.0;       // [m/s] range rate (negative = closing)
  double V_alpha = 0.0;   // [m/s] elevation-rate component
  double V_beta = 0.0;    // [m/s] azimuth-rate component
  double alpha_dot = 0.0; // [rad/s] = V_alpha / R
  double beta_dot = 0.0;  // [rad/s] = V_beta / (R cos(alpha))
};

/// Throws std::domain_error when cos(alpha) = 0 with nonzero V_beta
/// (the azimuth rate is undefined looking straight up/down).
relative_state relative_velocity(double V, double gamma, double chi,
                                 double alpha, double beta, double R);

/// @brief Horizontal/vertical displacement of the vehicle from the line
/// through the window centroid normal to the window plane.
struct displacement_state {
  double D_x = 0.0;  // [m] = x - x_centroid
  double D_z = 0.0;  // [m] = z - z_centroid
  double D = 0.0;    // [m] = sqrt(D_x^2 + D_z^2)
};

/// World-frame displacement form.
displacement_state displacements(const vec3& pos, const window_spec& win);

/// Bearing form: D_x = -(R1 cos a1 cos b1 + R2 cos a2 cos b2)/2,
/// D_z = -(R1 sin a1 + R4 sin a4)/2. Equals the world-frame form to 1e-9 m.
displacement_state displacements_from_bearings(const bearing_set& b,
                                               const std::array<double, 4>& R);

/// @brief Quadratic convergence monitor W = (D_x^2 + D_z^2)/2 and its rate
/// under the commanded velocity direction.
struct lyapunov_sample {
  double W = 0.0;      // [m^2]
  double W_dot = 0.0;  // [m^2/s]
  double t = 0.0;      // [s]
};

lyapunov_sample lyapunov(const displacement_state& d, double gamma_des,
                         double chi_des, double V, double t = 0.0);

}  // namespace wtg
