#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wtg/experiments.hpp"

namespace wtg {

/// Thrown on malformed or inconsistent configuration input; the message
/// names the violated invariant (or the parse location).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct noise_config {
  double sigma = 0.0;        // [rad]
  std::uint64_t seed = 1;
};

enum class portrait_plane { alpha, beta, both };

struct portrait_config {
  std::vector<angle_ic> initial_conditions;  // [rad]; empty -> stock set
  portrait_plane plane = portrait_plane::both;
  double dt = 0.005;     // [s]
  double t_max = 200.0;  // [s]
};

/// @brief Everything a CLI invocation needs. An empty JSON document yields
/// the stock scenario: 4 m x 3 m window, origin start, noise off, full-model
/// fidelity, and the seven-level noise sweep for Monte-Carlo batches.
struct run_config {
  fidelity_kind fidelity = fidelity_kind::sixdof;
  scenario sc;
  vec3 start{0.0, 0.0, 0.0};
  std::optional<double> dt;  // [s]; unset -> fidelity default
  noise_config noise;
  monte_carlo_spec mc;
  portrait_config portrait;
};

/// Integration step for cfg's active fidelity (explicit dt wins).
double config_dt(const run_config& cfg);

/// Parses a JSON document. Unknown keys, malformed values, and inconsistent
/// geometry all raise config_error.
run_config parse_config(const std::string& text);

/// Reads path and parses it; an empty file is a valid (all-default) config.
run_config load_config(const std::string& path);

}  // namespace wtg
