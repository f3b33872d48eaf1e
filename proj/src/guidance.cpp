#include "wtg/guidance.hpp"

namespace wtg {

double wrap_pi(double a) {
  double r = std::fmod(a + M_PI, 2.0 * M_PI);
  if (r < 0.0) r += 2.0 * M_PI;
  return r - M_PI;
}

double shaping_gamma(double m) {
  if (m < -M_PI_2 || m > M_PI_2)
    throw std::domain_error("shaping_gamma: bisector outside [-pi/2, pi/2]");
  // Normalized ellipse form: with t the distance of the bisector from the
  // nearer endpoint +-pi/2, the magnitude is (pi/4) * sqrt(1 - (t/(pi/2))^2).
  // Evaluating the radicand at unit scale keeps the endpoint values exact.
  const double t = (m <= 0.0) ? m + M_PI_2 : m - M_PI_2;
  const double u = t / M_PI_2;
  return sgn(m) * (M_PI / 4.0) * std::sqrt(std::abs(1.0 - u * u));
}

double shaping_chi(double beta1, double beta2) {
  if (beta1 < 0.0 || beta1 > M_PI || beta2 < 0.0 || beta2 > M_PI)
    throw std::domain_error("shaping_chi: azimuth outside [0, pi]");
  const double s = beta1 + beta2;
  return sgn(0.5 * s - M_PI_2) * std::sqrt(std::abs(M_PI * M_PI - s * s)) / 4.0;
}

double gamma_des(double alpha1, double alpha4) {
  if (alpha1 < -M_PI_2 || alpha1 > M_PI_2 || alpha4 < -M_PI_2 || alpha4 > M_PI_2)
    throw std::domain_error("gamma_des: elevation outside [-pi/2, pi/2]");
  const double m = 0.5 * (alpha1 + alpha4);
  const double u = m + shaping_gamma(m);
  if (u > M_PI_2) return M_PI - u;
  if (u < -M_PI_2) return -(M_PI + u);
  return u;
}

double chi_des(double beta1, double beta2, double alpha1, double alpha4) {
  const double m = 0.5 * (alpha1 + alpha4);
  const double u = m + shaping_gamma(m);
  double h = 0.5 * (beta1 + beta2) + shaping_chi(beta1, beta2);
  if (u > M_PI_2 || u < -M_PI_2) h = -h;  // negate, then wrap
  return wrap_pi(h);
}

bool traversal_condition(const bearing_set& b, double tol, bool alternate_vertices) {
  const double b_left = alternate_vertices ? b.beta[3] : b.beta[0];
  const double b_right = alternate_vertices ? b.beta[2] : b.beta[1];
  return std::abs(b_left - M_PI) <= tol && std::abs(b_right) <= tol;
}

guidance_command guidance_step(const bearing_set& b, const guidance_config& cfg, bool latched) {
  guidance_command cmd;
  cmd.traversal_latched = latched;
  if (latched) {
    cmd.gamma_des = 0.0;
    cmd.chi_des = M_PI_2;
  } else {
    const double a_top = cfg.use_alternate_vertices ? b.alpha[1] : b.alpha[0];
    const double a_bot = cfg.use_alternate_vertices ? b.alpha[2] : b.alpha[3];
    const double b_left = cfg.use_alternate_vertices ? b.beta[3] : b.beta[0];
    const double b_right = cfg.use_alternate_vertices ? b.beta[2] : b.beta[1];
    cmd.s_gamma = shaping_gamma(0.5 * (a_top + a_bot));
    cmd.s_chi = shaping_chi(b_left, b_right);
    cmd.gamma_des = gamma_des(a_top, a_bot);
    cmd.chi_des = chi_des(b_left, b_right, a_top, a_bot);
  }
  cmd.v_des = desired_velocity(cmd.gamma_des, cmd.chi_des, cfg.V);
  return cmd;
}

vec3 desired_velocity(double gamma, double chi, double V) {
  const double cg = std::cos(gamma);
  return {V * cg * std::cos(chi), V * cg * std::sin(chi), V * std::sin(gamma)};
}

}  // namespace wtg
