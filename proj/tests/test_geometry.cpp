#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "wtg/geometry.hpp"

using namespace wtg;

namespace {

vec3 random_approach_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, 30.0), uy(0.0, 14.9), uz(0.0, 20.0);
  return {ux(rng), uy(rng), uz(rng)};
}

}  // namespace

TEST_CASE("default window geometry") {
  const window_spec w = default_window();
  CHECK(w.width_a == 4.0);
  CHECK(w.height_b == 3.0);
  CHECK(w.centroid.x == 14.0);
  CHECK(w.centroid.y == 15.0);
  CHECK(w.centroid.z == 11.5);
  CHECK(w.plane_y == 15.0);
  CHECK(w.normal.y == 1.0);
}

TEST_CASE("window validation names the violated invariant") {
  const vec3 e1{12, 15, 13}, e2{16, 15, 13}, e3{16, 15, 10}, e4{12, 15, 10};
  CHECK_THROWS_WITH_AS(window_spec::from_vertices(e1, {16, 14, 13}, e3, e4),
                       "window_spec: vertices not coplanar (y-coordinates differ)",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(window_spec::from_vertices(e1, e2, {17, 15, 10}, e4),
                       "window_spec: top and bottom edges must have equal positive length",
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(window_spec::from_vertices(e2, e1, {12, 15, 10}, {16, 15, 10}),
                       "window_spec: e1->e2 must run along +x_w", std::invalid_argument);
  CHECK_THROWS_WITH_AS(window_spec::from_vertices(e1, e2, {16, 15, 14}, {12, 15, 14}),
                       "window_spec: e1->e4 must run along -z_w", std::invalid_argument);
  // Same edge lengths, e3 displaced: parallelogram instead of a rectangle.
  CHECK_THROWS(window_spec::from_vertices({0, 0, 3}, {4, 0, 4}, {8, 0, 1}, {4, 0, 0}));
}

TEST_CASE("bearing angles at the origin match the direct evaluation") {
  const window_spec w = default_window();
  const auto R = vertex_ranges({0, 0, 0}, w);
  CHECK(R[0] == 23.194827009486403);  // sqrt(538)
  const bearing_set b = bearing_angles({0, 0, 0}, w);
  CHECK(b.beta[0] == 0.8960553845713439);    // atan2(15, 12)
  CHECK(b.alpha[0] == 0.5949529598234163);   // asin(13 / sqrt(538))
  // Elevations of the bottom vertices are smaller but positive from below.
  CHECK(b.alpha[3] > 0.0);
  CHECK(b.alpha[3] < b.alpha[0]);
  // Azimuths decrease left to right.
  CHECK(b.beta[0] > b.beta[1]);
}

TEST_CASE("strict bearings reject off-side and degenerate geometry") {
  const window_spec w = default_window();
  CHECK_THROWS_AS(bearing_angles({14, 15.001, 11.5}, w), std::domain_error);
  CHECK_THROWS_AS(bearing_angles({12, 15, 13}, w), std::domain_error);  // on vertex e1
  CHECK_THROWS_WITH_AS(bearing_angles(w.e2, w),
                       "bearing_angles: vehicle coincides with window vertex 2 (degenerate geometry)",
                       std::domain_error);
  CHECK_NOTHROW(bearing_angles({14, 15.0, 11.5}, w));  // in-plane is the boundary case
}

TEST_CASE("continued bearings agree on the approach side and mirror across the plane") {
  const window_spec w = default_window();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const vec3 p = random_approach_point(rng);
    const bearing_set s = bearing_angles(p, w);
    const bearing_set c = bearing_angles_continued(p, w);
    for (int k = 0; k < 4; ++k) {
      CHECK(s.alpha[k] == c.alpha[k]);
      CHECK(std::abs(s.beta[k] - c.beta[k]) <= 1e-14);
    }
  }
  // Mirror symmetry of the continuation in the plane distance.
  const vec3 near{13.0, 14.9, 11.0}, far{13.0, 15.1, 11.0};
  const bearing_set bn = bearing_angles_continued(near, w);
  const bearing_set bf = bearing_angles_continued(far, w);
  for (int k = 0; k < 4; ++k) CHECK(bn.beta[k] == bf.beta[k]);
  // In-plane azimuth is exactly 0 or pi depending on the vertex side.
  const bearing_set bp = bearing_angles_continued({14.0, 15.0, 11.0}, w);
  CHECK(bp.beta[0] == M_PI);  // e1 at x=12 lies in -x from x=14
  CHECK(bp.beta[1] == 0.0);   // e2 at x=16 lies in +x
}

TEST_CASE("range/bearing identities hold at random approach points") {
  const window_spec w = default_window();
  const vec3 verts[4] = {w.e1, w.e2, w.e3, w.e4};
  std::mt19937_64 rng(12);
  for (int i = 0; i < 5000; ++i) {
    const vec3 p = random_approach_point(rng);
    const bearing_set b = bearing_angles(p, w);
    const auto R = vertex_ranges(p, w);
    const double dy = w.plane_y - p.y;
    for (int k = 0; k < 4; ++k) {
      // Projection identity: every line of sight shares the plane distance.
      CHECK(std::abs(R[k] * std::cos(b.alpha[k]) * std::sin(b.beta[k]) - dy) <=
            1e-12 * (1.0 + std::abs(dy)));
      // Full position reconstruction from one bearing pair and its range.
      const vec3 q{verts[k].x - R[k] * std::cos(b.alpha[k]) * std::cos(b.beta[k]),
                   verts[k].y - R[k] * std::cos(b.alpha[k]) * std::sin(b.beta[k]),
                   verts[k].z - R[k] * std::sin(b.alpha[k])};
      CHECK(std::abs(q.x - p.x) <= 1e-9);
      CHECK(std::abs(q.y - p.y) <= 1e-9);
      CHECK(std::abs(q.z - p.z) <= 1e-9);
    }
    // Shared-x vertex pairs: similar triangles through the common foot.
    CHECK(std::abs(std::cos(b.alpha[0]) / std::cos(b.alpha[3]) - R[3] / R[0]) <= 1e-9);
    CHECK(std::abs(R[0] * std::cos(b.alpha[0]) / (R[1] * std::cos(b.alpha[1])) -
                   std::sin(b.beta[1]) / std::sin(b.beta[0])) <= 1e-9);
    // Azimuths repeat across the shared-x pairs.
    CHECK(b.beta[3] == b.beta[0]);
    CHECK(b.beta[2] == b.beta[1]);
  }
}

TEST_CASE("bearing-form displacements equal the world-frame form") {
  const window_spec w = default_window();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 5000; ++i) {
    const vec3 p = random_approach_point(rng);
    const displacement_state dw = displacements(p, w);
    const displacement_state db =
        displacements_from_bearings(bearing_angles(p, w), vertex_ranges(p, w));
    CHECK(std::abs(dw.D_x - db.D_x) <= 1e-9);
    CHECK(std::abs(dw.D_z - db.D_z) <= 1e-9);
  }
  const displacement_state d0 = displacements({0, 0, 0}, w);
  CHECK(d0.D_x == -14.0);
  CHECK(d0.D_z == -11.5);
}

TEST_CASE("relative velocity components and rates") {
  // Level flight at the azimuth line of sight closes at -cos(alpha)cos(beta).
  const double a = std::asin(0.6);
  const double b = std::atan2(15.0, 12.0);
  const relative_state r = relative_velocity(1.0, 0.0, 0.0, a, b, 10.0);
  CHECK(r.V_R == -0.49975603804353946);
  CHECK(r.alpha_dot == r.V_alpha / 10.0);

  // Finite-difference consistency of the angular rates along a short arc.
  const window_spec w = default_window();
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> ug(-1.2, 1.2), uc(-3.0, 3.0);
  const double V = 1.0, dt = 1e-6;
  for (int i = 0; i < 200; ++i) {
    const vec3 p = random_approach_point(rng);
    const double gamma = ug(rng), chi = uc(rng);
    const auto R0 = vertex_ranges(p, w);
    if (std::min(std::min(R0[0], R0[1]), std::min(R0[2], R0[3])) < 0.5)
      continue;  // keep the difference quotient in its linear regime
    const bearing_set b0 = bearing_angles(p, w);
    const vec3 v{V * std::cos(gamma) * std::cos(chi), V * std::cos(gamma) * std::sin(chi),
                 V * std::sin(gamma)};
    const vec3 q = p + dt * v;
    if (!(q.y < w.plane_y)) continue;
    const bearing_set b1 = bearing_angles(q, w);
    for (int k = 0; k < 4; ++k) {
      const relative_state rs = relative_velocity(V, gamma, chi, b0.alpha[k], b0.beta[k], R0[k]);
      CHECK(std::abs((b1.alpha[k] - b0.alpha[k]) / dt - rs.alpha_dot) <= 10.0 * dt * V + 1e-6);
      CHECK(std::abs((b1.beta[k] - b0.beta[k]) / dt - rs.beta_dot) <= 10.0 * dt * V + 1e-6);
    }
  }

  CHECK_THROWS_AS(relative_velocity(1.0, 0.0, 0.0, 0.3, 0.5, 0.0), std::domain_error);
}

TEST_CASE("convergence monitor") {
  const window_spec w = default_window();
  const lyapunov_sample s = lyapunov(displacements({0, 0, 0}, w), 0.0, 0.0, 1.0);
  CHECK(s.W == 164.125);
  // Climbing at positive gamma from below the centroid drives W down.
  const lyapunov_sample c = lyapunov(displacements({14, 0, 0}, w), 0.5, M_PI_2, 1.0);
  CHECK(c.W_dot < 0.0);
}
