#include "wtg/geometry.hpp"

#include <string>

namespace wtg {

namespace {

constexpr double k_degenerate_range = 1e-6;  // [m]

double clamp(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

}  // namespace

window_spec window_spec::from_vertices(const vec3& e1, const vec3& e2,
                                       const vec3& e3, const vec3& e4) {
  const double y = e1.y;
  if (e2.y != y || e3.y != y || e4.y != y)
    throw std::invalid_argument("window_spec: vertices not coplanar (y-coordinates differ)");

  const double a_top = norm(e2 - e1);
  const double a_bot = norm(e3 - e4);
  const double b_left = norm(e1 - e4);
  const double b_right = norm(e2 - e3);
  if (!(a_top > 0.0) || std::abs(a_top - a_bot) > 1e-12)
    throw std::invalid_argument("window_spec: top and bottom edges must have equal positive length");
  if (!(b_left > 0.0) || std::abs(b_left - b_right) > 1e-12)
    throw std::invalid_argument("window_spec: left and right edges must have equal positive length");

  // Ordering: e1->e2 along +x_w (top edge), e1->e4 along -z_w (left edge).
  if (!(e2.x > e1.x) || e2.z != e1.z)
    throw std::invalid_argument("window_spec: e1->e2 must run along +x_w");
  if (!(e4.z < e1.z) || e4.x != e1.x)
    throw std::invalid_argument("window_spec: e1->e4 must run along -z_w");
  if (e3.x != e2.x || e3.z != e4.z)
    throw std::invalid_argument("window_spec: e3 must close the rectangle");

  window_spec w;
  w.e1 = e1; w.e2 = e2; w.e3 = e3; w.e4 = e4;
  w.width_a = a_top;
  w.height_b = b_left;
  w.centroid = {0.25 * (e1.x + e2.x + e3.x + e4.x), y,
                0.25 * (e1.z + e2.z + e3.z + e4.z)};
  w.normal = {0.0, 1.0, 0.0};
  w.plane_y = y;
  return w;
}

window_spec default_window() {
  return window_spec::from_vertices({12.0, 15.0, 13.0}, {16.0, 15.0, 13.0},
                                    {16.0, 15.0, 10.0}, {12.0, 15.0, 10.0});
}

namespace {

bearing_set bearings_impl(const vec3& pos, const window_spec& win, bool continued) {
  const vec3* verts[4] = {&win.e1, &win.e2, &win.e3, &win.e4};
  const double dy = win.plane_y - pos.y;
  if (!continued && dy < 0.0)
    throw std::domain_error("bearing_angles: vehicle past the window plane (azimuth leaves [0, pi])");

  bearing_set b;
  for (int i = 0; i < 4; ++i) {
    const vec3 d = *verts[i] - pos;
    const double R = norm(d);
    if (R < k_degenerate_range)
      throw std::domain_error("bearing_angles: vehicle coincides with window vertex " +
                              std::to_string(i + 1) + " (degenerate geometry)");
    // asin argument clamped against rounding at |d.z| ~ R.
    b.alpha[i] = std::asin(clamp(d.z / R, -1.0, 1.0));
    if (continued) {
      // Continuation across the plane: even in dy about dy = 0, which keeps
      // the azimuth inside [0, pi] when an integrator stage pokes past the
      // plane, and equal to atan2(dy, d.x) for dy > 0.
      if (d.x > 0.0)
        b.beta[i] = std::atan2(std::abs(dy), d.x);
      else if (d.x < 0.0)
        b.beta[i] = M_PI - std::atan2(std::abs(dy), -d.x);
      else
        b.beta[i] = M_PI_2;
    } else {
      b.beta[i] = std::atan2(dy, d.x);
    }
  }
  return b;
}

}  // namespace

bearing_set bearing_angles(const vec3& pos, const window_spec& win) {
  return bearings_impl(pos, win, false);
}

bearing_set bearing_angles_continued(const vec3& pos, const window_spec& win) {
  return bearings_impl(pos, win, true);
}

std::array<double, 4> vertex_ranges(const vec3& pos, const window_spec& win) {
  return {norm(win.e1 - pos), norm(win.e2 - pos), norm(win.e3 - pos), norm(win.e4 - pos)};
}

relative_state relative_velocity(double V, double gamma, double chi,
                                 double alpha, double beta, double R) {
  if (!(R > 0.0)) throw std::domain_error("relative_velocity: range must be positive");
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double cd = std::cos(chi - beta), sd = std::sin(chi - beta);

  relative_state r;
  r.V_R = -V * (cg * ca * cd + sg * sa);
  r.V_alpha = -V * (-cg * sa * cd + sg * ca);
  r.V_beta = -V * cg * sd;
  r.alpha_dot = r.V_alpha / R;
  if (ca == 0.0) {
    if (r.V_beta != 0.0)
      throw std::domain_error("relative_velocity: azimuth rate undefined at cos(alpha) = 0 (singular geometry)");
    r.beta_dot = 0.0;
  } else {
    r.beta_dot = r.V_beta / (R * ca);
  }
  return r;
}

displacement_state displacements(const vec3& pos, const window_spec& win) {
  displacement_state d;
  d.D_x = pos.x - win.centroid.x;
  d.D_z = pos.z - win.centroid.z;
  d.D = std::hypot(d.D_x, d.D_z);
  return d;
}

displacement_state displacements_from_bearings(const bearing_set& b,
                                               const std::array<double, 4>& R) {
  displacement_state d;
  d.D_x = -0.5 * (R[0] * std::cos(b.alpha[0]) * std::cos(b.beta[0]) +
                  R[1] * std::cos(b.alpha[1]) * std::cos(b.beta[1]));
  d.D_z = -0.5 * (R[0] * std::sin(b.alpha[0]) + R[3] * std::sin(b.alpha[3]));
  d.D = std::hypot(d.D_x, d.D_z);
  return d;
}

lyapunov_sample lyapunov(const displacement_state& d, double gamma_des,
                         double chi_des, double V, double t) {
  lyapunov_sample s;
  s.W = 0.5 * (d.D_x * d.D_x + d.D_z * d.D_z);
  s.W_dot = d.D_x * V * std::cos(gamma_des) * std::cos(chi_des) +
            d.D_z * V * std::sin(gamma_des);
  s.t = t;
  return s;
}

}  // namespace wtg
