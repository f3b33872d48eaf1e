#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "wtg/config.hpp"
#include "wtg/csv.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;          // I/O or internal failure
constexpr int exit_non_converged = 2;  // reached t_max or crossed outside the window
constexpr int exit_diverged = 3;
constexpr int exit_config = 4;

constexpr double k_deg = M_PI / 180.0;

struct cli_options {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma_deg;
  std::optional<std::string> fidelity;
  std::optional<double> dt;
  bool quiet = false;
};

void add_common_options(CLI::App* sub, cli_options& o) {
  sub->add_option("--config", o.config_path, "JSON configuration file");
  sub->add_option("--out", o.out_dir, "output directory (default: out)");
  sub->add_option("--seed", o.seed, "override the noise / Monte-Carlo master seed");
  sub->add_option("--sigma-deg", o.sigma_deg, "override the bearing-noise std dev [deg]")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--fidelity", o.fidelity, "kinematic or sixdof")
      ->check(CLI::IsMember({"kinematic", "sixdof"}));
  sub->add_option("--dt", o.dt, "override the integration step [s]")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--quiet", o.quiet, "suppress progress output");
}

void apply_overrides(wtg::run_config& cfg, const cli_options& o) {
  if (o.fidelity) {
    cfg.fidelity =
        *o.fidelity == "sixdof" ? wtg::fidelity_kind::sixdof : wtg::fidelity_kind::kinematic;
    cfg.mc.fidelity = cfg.fidelity;
  }
  if (o.seed) {
    cfg.noise.seed = *o.seed;
    cfg.mc.master_seed = *o.seed;
  }
  if (o.sigma_deg) cfg.noise.sigma = *o.sigma_deg * k_deg;
  if (o.dt) cfg.dt = *o.dt;
  // Fold the resolved step back into the scenario so batch runs see it too.
  if (cfg.fidelity == wtg::fidelity_kind::sixdof)
    cfg.sc.dt_sixdof = wtg::config_dt(cfg);
  else
    cfg.sc.dt_kinematic = wtg::config_dt(cfg);
}

const char* outcome_name(wtg::run_result::status s) {
  switch (s) {
    case wtg::run_result::status::converged:
      return "converged";
    case wtg::run_result::status::non_converged:
      return "non_converged";
    default:
      return "diverged";
  }
}

int outcome_exit_code(const wtg::run_result& res) {
  if (res.outcome == wtg::run_result::status::diverged) return exit_diverged;
  if (res.outcome == wtg::run_result::status::converged && res.safe) return exit_ok;
  return exit_non_converged;
}

void write_summary_json(const std::string& path, const wtg::run_result& res) {
  nlohmann::json j;
  j["outcome"] = outcome_name(res.outcome);
  if (!res.diagnostic.empty()) j["diagnostic"] = res.diagnostic;
  j["success"] = res.crossed && res.safe;
  j["latched"] = res.latched;
  if (res.crossed) {
    j["t_T_s"] = res.t_T;
    j["crossing"] = {res.crossing.x, res.crossing.y, res.crossing.z};
    j["miss_m"] = res.miss;
  } else {
    j["t_T_s"] = nullptr;
    j["crossing"] = nullptr;
    j["miss_m"] = nullptr;
  }
  j["max_abs_roll_deg"] = res.max_abs_roll / k_deg;
  j["max_abs_pitch_deg"] = res.max_abs_pitch / k_deg;
  j["max_tracking_err_m"] = res.max_tracking_err;
  j["w_monotone"] = res.w_violations == 0;
  j["w_violations"] = res.w_violations;
  j["max_w_dot"] = res.max_w_dot;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << j.dump(2) << '\n';
}

int cmd_run(const wtg::run_config& cfg, const cli_options& o) {
  std::filesystem::create_directories(o.out_dir);
  const double dt = wtg::config_dt(cfg);

  wtg::run_result res;
  if (cfg.fidelity == wtg::fidelity_kind::sixdof) {
    wtg::rigid_body_state s0;
    s0.pos = cfg.start;
    wtg::sixdof_options opt;
    opt.dt = dt;
    opt.t_max = cfg.sc.t_max;
    opt.sigma = cfg.noise.sigma;
    std::mt19937_64 rng(wtg::mix_seed(cfg.noise.seed, 0, 0));
    res = wtg::run_sixdof(s0, cfg.sc.win, cfg.sc.guidance, cfg.sc.gains, cfg.sc.params, opt,
                          cfg.noise.sigma > 0.0 ? &rng : nullptr);
  } else if (cfg.noise.sigma > 0.0) {
    std::mt19937_64 rng(wtg::mix_seed(cfg.noise.seed, 0, 0));
    res = wtg::run_kinematic_measured(cfg.start, cfg.sc, dt, cfg.noise.sigma, rng, true);
  } else {
    wtg::kinematic_options opt;
    opt.dt = dt;
    opt.t_max = cfg.sc.t_max;
    res = wtg::run_kinematic(cfg.start, cfg.sc.win, cfg.sc.guidance, opt);
  }

  wtg::write_trajectory_csv(o.out_dir + "/trajectory.csv", res.trace);
  write_summary_json(o.out_dir + "/summary.json", res);

  if (!o.quiet) {
    if (res.crossed)
      std::cout << "outcome: " << outcome_name(res.outcome) << ", t_T " << res.t_T << " s, miss "
                << res.miss << " m, " << (res.safe ? "inside" : "outside") << " the window\n";
    else
      std::cout << "outcome: " << outcome_name(res.outcome)
                << (res.diagnostic.empty() ? "" : " (" + res.diagnostic + ")") << '\n';
  }
  return outcome_exit_code(res);
}

int cmd_montecarlo(const wtg::run_config& cfg, const cli_options& o) {
  std::filesystem::create_directories(o.out_dir);
  const wtg::monte_carlo_stats stats = wtg::run_monte_carlo(cfg.mc, cfg.sc);
  wtg::write_stats_csv(o.out_dir + "/stats.csv", stats.rows);
  wtg::write_runs_csv(o.out_dir + "/runs.csv", stats.runs, cfg.mc.sigma_list);

  bool any_unsafe = false, any_diverged = false;
  for (const wtg::per_run_record& r : stats.runs) {
    if (!r.success) any_unsafe = true;
    if (r.outcome == wtg::run_result::status::diverged) any_diverged = true;
  }
  if (!o.quiet)
    for (const wtg::sigma_stats& row : stats.rows)
      std::cout << "sigma " << row.sigma / k_deg << " deg: mean miss " << row.mean_miss
                << " m, success " << 100.0 * row.success_rate << "% of " << row.n << '\n';
  if (any_diverged) return exit_diverged;
  return any_unsafe ? exit_non_converged : exit_ok;
}

int cmd_phase_portrait(const wtg::run_config& cfg, const cli_options& o) {
  std::filesystem::create_directories(o.out_dir);
  const std::vector<wtg::angle_ic> ics = cfg.portrait.initial_conditions.empty()
                                             ? wtg::default_phase_ics()
                                             : cfg.portrait.initial_conditions;
  for (std::size_t i = 0; i < ics.size(); ++i) {
    try {
      wtg::position_from_angles(ics[i], cfg.sc.win);
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid initial condition " << i << ": " << e.what() << '\n';
      return exit_config;
    }
  }

  wtg::kinematic_options opt;
  opt.dt = cfg.portrait.dt;
  opt.t_max = cfg.portrait.t_max;
  const auto emit = [&](wtg::phase_portrait::plane_kind plane, const std::string& tag) {
    const wtg::phase_portrait p =
        wtg::make_phase_portrait(plane, ics, cfg.sc.win, cfg.sc.guidance, opt);
    wtg::write_portrait_csv(o.out_dir + "/portrait_" + tag + ".csv", p);
    wtg::write_portrait_equilibrium_csv(o.out_dir + "/portrait_" + tag + "_equilibrium.csv", p);
    if (!o.quiet)
      std::cout << "portrait_" << tag << ".csv: " << ics.size() << " trajectories, equilibrium ("
                << p.equilibrium_a << ", " << p.equilibrium_b << ") deg\n";
  };
  if (cfg.portrait.plane != wtg::portrait_plane::beta)
    emit(wtg::phase_portrait::plane_kind::alpha1_alpha4, "alpha");
  if (cfg.portrait.plane != wtg::portrait_plane::alpha)
    emit(wtg::phase_portrait::plane_kind::beta1_beta2, "beta");
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bearings-only guidance for quadrotor window traversal"};
  app.require_subcommand(1);
  cli_options o;
  CLI::App* c_run = app.add_subcommand("run", "single closed-loop traversal run");
  CLI::App* c_mc = app.add_subcommand("montecarlo", "noise sweep over random starts");
  CLI::App* c_pp = app.add_subcommand("phase-portrait", "bearing-angle phase portraits");
  CLI::App* c_val = app.add_subcommand("validate-config", "parse a config and report problems");
  for (CLI::App* sub : {c_run, c_mc, c_pp, c_val}) add_common_options(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  wtg::run_config cfg;
  try {
    cfg = wtg::load_config(o.config_path);
    apply_overrides(cfg, o);
  } catch (const wtg::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }

  try {
    if (c_val->parsed()) {
      if (!o.quiet) std::cout << "config valid\n";
      return exit_ok;
    }
    if (c_run->parsed()) return cmd_run(cfg, o);
    if (c_mc->parsed()) return cmd_montecarlo(cfg, o);
    return cmd_phase_portrait(cfg, o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
}
