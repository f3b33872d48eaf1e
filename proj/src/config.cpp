#include "wtg/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace wtg {

namespace {

using nlohmann::json;

constexpr double k_deg = M_PI / 180.0;  // [rad/deg]

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

void check_keys(const json& j, const std::string& scope,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail("unknown key '" + item.key() + "' in " + scope);
  }
}

double as_number(const json& j, const std::string& name) {
  if (!j.is_number()) fail(name + " must be a number");
  return j.get<double>();
}

double as_positive(const json& j, const std::string& name) {
  const double v = as_number(j, name);
  if (!(v > 0.0)) fail(name + " must be positive");
  return v;
}

double as_non_negative(const json& j, const std::string& name) {
  const double v = as_number(j, name);
  if (!(v >= 0.0)) fail(name + " must be non-negative");
  return v;
}

int as_int_at_least(const json& j, const std::string& name, int lo) {
  if (!j.is_number_integer()) fail(name + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < lo) fail(name + " must be >= " + std::to_string(lo));
  return static_cast<int>(v);
}

std::uint64_t as_seed(const json& j, const std::string& name) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  fail(name + " must be a non-negative integer");
}

bool as_bool(const json& j, const std::string& name) {
  if (!j.is_boolean()) fail(name + " must be a boolean");
  return j.get<bool>();
}

vec3 as_vec3(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 3) fail(name + " must be an array of 3 numbers");
  return {as_number(j[0], name + "[0]"), as_number(j[1], name + "[1]"),
          as_number(j[2], name + "[2]")};
}

void as_range(const json& j, const std::string& name, double out[2]) {
  if (!j.is_array() || j.size() != 2) fail(name + " must be an array of 2 numbers");
  out[0] = as_number(j[0], name + "[0]");
  out[1] = as_number(j[1], name + "[1]");
  if (!(out[0] < out[1])) fail(name + " bounds must be increasing");
}

void maybe(const json& j, const char* key, const std::string& scope, auto&& apply) {
  if (auto it = j.find(key); it != j.end()) apply(*it, scope + "." + key);
}

void parse_window(const json& j, run_config& cfg) {
  check_keys(j, "window", {"e1", "e2", "e3", "e4"});
  for (const char* k : {"e1", "e2", "e3", "e4"})
    if (!j.contains(k)) fail(std::string("window requires key '") + k + "'");
  try {
    cfg.sc.win = window_spec::from_vertices(
        as_vec3(j["e1"], "window.e1"), as_vec3(j["e2"], "window.e2"),
        as_vec3(j["e3"], "window.e3"), as_vec3(j["e4"], "window.e4"));
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

void parse_gains(const json& j, controller_gains& g) {
  check_keys(j, "gains",
             {"K_pz", "K_dz", "K_pjx", "K_djx", "K_pjy", "K_djy", "K_px", "K_dx",
              "K_py", "K_dy", "use_position_feedforward", "K_pphi", "K_dphi",
              "K_ptheta", "K_dtheta", "K_ppsi", "K_dpsi"});
  const auto num = [&](const char* key, double& dst) {
    maybe(j, key, "gains", [&](const json& v, const std::string& name) { dst = as_number(v, name); });
  };
  num("K_pz", g.K_pz);
  num("K_dz", g.K_dz);
  num("K_pjx", g.K_pjx);
  num("K_djx", g.K_djx);
  num("K_pjy", g.K_pjy);
  num("K_djy", g.K_djy);
  num("K_px", g.K_px);
  num("K_dx", g.K_dx);
  num("K_py", g.K_py);
  num("K_dy", g.K_dy);
  num("K_pphi", g.K_pphi);
  num("K_dphi", g.K_dphi);
  num("K_ptheta", g.K_ptheta);
  num("K_dtheta", g.K_dtheta);
  num("K_ppsi", g.K_ppsi);
  num("K_dpsi", g.K_dpsi);
  maybe(j, "use_position_feedforward", "gains",
        [&](const json& v, const std::string& name) { g.use_position_feedforward = as_bool(v, name); });
}

void parse_params(const json& j, quad_params& p) {
  check_keys(j, "params", {"mass", "J", "g"});
  maybe(j, "mass", "params",
        [&](const json& v, const std::string& name) { p.m = as_positive(v, name); });
  maybe(j, "J", "params", [&](const json& v, const std::string& name) {
    const vec3 inertia = as_vec3(v, name);
    if (!(inertia.x > 0.0 && inertia.y > 0.0 && inertia.z > 0.0))
      fail(name + " entries must be positive");
    p.J_xx = inertia.x;
    p.J_yy = inertia.y;
    p.J_zz = inertia.z;
  });
  maybe(j, "g", "params",
        [&](const json& v, const std::string& name) { p.g = as_positive(v, name); });
}

void parse_monte_carlo(const json& j, monte_carlo_spec& mc) {
  check_keys(j, "monte_carlo", {"n_runs", "sigma_list_deg", "box_x", "box_y", "box_z",
                                "master_seed", "threads"});
  maybe(j, "n_runs", "monte_carlo",
        [&](const json& v, const std::string& name) { mc.n_runs = as_int_at_least(v, name, 1); });
  maybe(j, "sigma_list_deg", "monte_carlo", [&](const json& v, const std::string& name) {
    if (!v.is_array() || v.empty()) fail(name + " must be a non-empty array of numbers");
    mc.sigma_list.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      mc.sigma_list.push_back(k_deg *
                              as_non_negative(v[i], name + "[" + std::to_string(i) + "]"));
  });
  maybe(j, "box_x", "monte_carlo",
        [&](const json& v, const std::string& name) { as_range(v, name, mc.box_x); });
  maybe(j, "box_y", "monte_carlo",
        [&](const json& v, const std::string& name) { as_range(v, name, mc.box_y); });
  maybe(j, "box_z", "monte_carlo",
        [&](const json& v, const std::string& name) { as_range(v, name, mc.box_z); });
  maybe(j, "master_seed", "monte_carlo",
        [&](const json& v, const std::string& name) { mc.master_seed = as_seed(v, name); });
  maybe(j, "threads", "monte_carlo",
        [&](const json& v, const std::string& name) { mc.threads = as_int_at_least(v, name, 0); });
}

void parse_portrait(const json& j, portrait_config& pc) {
  check_keys(j, "phase_portrait", {"initial_conditions_deg", "plane", "dt", "t_max"});
  maybe(j, "initial_conditions_deg", "phase_portrait",
        [&](const json& v, const std::string& name) {
          if (!v.is_array() || v.empty()) fail(name + " must be a non-empty array");
          pc.initial_conditions.clear();
          for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string entry = name + "[" + std::to_string(i) + "]";
            const json& q = v[i];
            if (!q.is_array() || q.size() != 4)
              fail(entry + " must be an array of 4 angles [alpha1, alpha4, beta1, beta2]");
            angle_ic ic;
            ic.alpha1 = k_deg * as_number(q[0], entry + "[0]");
            ic.alpha4 = k_deg * as_number(q[1], entry + "[1]");
            ic.beta1 = k_deg * as_number(q[2], entry + "[2]");
            ic.beta2 = k_deg * as_number(q[3], entry + "[3]");
            pc.initial_conditions.push_back(ic);
          }
        });
  maybe(j, "plane", "phase_portrait", [&](const json& v, const std::string& name) {
    if (!v.is_string()) fail(name + " must be \"alpha\", \"beta\", or \"both\"");
    const std::string s = v.get<std::string>();
    if (s == "alpha")
      pc.plane = portrait_plane::alpha;
    else if (s == "beta")
      pc.plane = portrait_plane::beta;
    else if (s == "both")
      pc.plane = portrait_plane::both;
    else
      fail(name + " must be \"alpha\", \"beta\", or \"both\"");
  });
  maybe(j, "dt", "phase_portrait",
        [&](const json& v, const std::string& name) { pc.dt = as_positive(v, name); });
  maybe(j, "t_max", "phase_portrait",
        [&](const json& v, const std::string& name) { pc.t_max = as_positive(v, name); });
}

std::vector<double> default_sigma_list() {
  std::vector<double> out;
  for (int d = 1; d <= 7; ++d) out.push_back(k_deg * d);
  return out;
}

}  // namespace

double config_dt(const run_config& cfg) {
  if (cfg.dt) return *cfg.dt;
  return cfg.fidelity == fidelity_kind::sixdof ? cfg.sc.dt_sixdof : cfg.sc.dt_kinematic;
}

run_config parse_config(const std::string& text) {
  run_config cfg;
  cfg.mc.sigma_list = default_sigma_list();

  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(e.what());
  }
  if (doc.is_null()) return cfg;
  if (!doc.is_object()) fail("config root must be a JSON object");

  check_keys(doc, "config",
             {"fidelity", "window", "start", "V", "dt", "t_max", "traversal_tol_deg",
              "noise", "gains", "params", "guidance", "monte_carlo", "phase_portrait"});

  maybe(doc, "fidelity", "config", [&](const json& v, const std::string& name) {
    if (!v.is_string()) fail(name + " must be \"kinematic\" or \"sixdof\"");
    const std::string s = v.get<std::string>();
    if (s == "kinematic")
      cfg.fidelity = fidelity_kind::kinematic;
    else if (s == "sixdof")
      cfg.fidelity = fidelity_kind::sixdof;
    else
      fail(name + " must be \"kinematic\" or \"sixdof\"");
  });

  if (auto it = doc.find("window"); it != doc.end()) {
    if (!it->is_object()) fail("window must be an object");
    parse_window(*it, cfg);
  }

  maybe(doc, "start", "config",
        [&](const json& v, const std::string& name) { cfg.start = as_vec3(v, name); });
  if (!(cfg.start.y < cfg.sc.win.plane_y))
    fail("start must lie on the approach side of the window plane");

  maybe(doc, "V", "config",
        [&](const json& v, const std::string& name) { cfg.sc.guidance.V = as_positive(v, name); });
  maybe(doc, "dt", "config",
        [&](const json& v, const std::string& name) { cfg.dt = as_positive(v, name); });
  maybe(doc, "t_max", "config",
        [&](const json& v, const std::string& name) { cfg.sc.t_max = as_positive(v, name); });
  maybe(doc, "traversal_tol_deg", "config", [&](const json& v, const std::string& name) {
    cfg.sc.guidance.traversal_tol_beta = k_deg * as_positive(v, name);
  });

  if (auto it = doc.find("noise"); it != doc.end()) {
    if (!it->is_object()) fail("noise must be an object");
    check_keys(*it, "noise", {"sigma_deg", "seed"});
    maybe(*it, "sigma_deg", "noise", [&](const json& v, const std::string& name) {
      cfg.noise.sigma = k_deg * as_non_negative(v, name);
    });
    maybe(*it, "seed", "noise",
          [&](const json& v, const std::string& name) { cfg.noise.seed = as_seed(v, name); });
  }

  if (auto it = doc.find("gains"); it != doc.end()) {
    if (!it->is_object()) fail("gains must be an object");
    parse_gains(*it, cfg.sc.gains);
  }
  if (auto it = doc.find("params"); it != doc.end()) {
    if (!it->is_object()) fail("params must be an object");
    parse_params(*it, cfg.sc.params);
  }
  if (auto it = doc.find("guidance"); it != doc.end()) {
    if (!it->is_object()) fail("guidance must be an object");
    check_keys(*it, "guidance", {"use_alternate_vertices"});
    maybe(*it, "use_alternate_vertices", "guidance", [&](const json& v, const std::string& name) {
      cfg.sc.guidance.use_alternate_vertices = as_bool(v, name);
    });
  }
  if (auto it = doc.find("monte_carlo"); it != doc.end()) {
    if (!it->is_object()) fail("monte_carlo must be an object");
    parse_monte_carlo(*it, cfg.mc);
  }
  if (auto it = doc.find("phase_portrait"); it != doc.end()) {
    if (!it->is_object()) fail("phase_portrait must be an object");
    parse_portrait(*it, cfg.portrait);
  }

  cfg.mc.fidelity = cfg.fidelity;
  return cfg;
}

run_config load_config(const std::string& path) {
  if (path.empty()) return parse_config("");
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace wtg
