#pragma once

#include <optional>
#include <string>

#include "curvedstrip/strip2d.hpp"

namespace cstrip {

enum class Command { bound2d, dk, hardy, stability };
const char* to_string(Command c);

/// Parsed and validated JSON run configuration.
///
///   {"a": 1, "s_min": -6, "s_max": 6,
///    "kappa": {"type": "bump", "base": 0, "amplitude": -0.3, "center": 0, "halfwidth": 1},
///    "alpha": {"type": "const", "value": 0},
///    "alpha0": 0, "end_bc": "neumann", "ns": 128, "nt": 32}
///
/// Profile types: const {value}; bump {base, amplitude, center, halfwidth}
/// or {base, bumps: [{amplitude, center, halfwidth}, ...]}; csv {path} with
/// header "s,<name>". Command keys: hardy takes "trials"; stability takes
/// "interval" [lo, hi], "negative_bump" {center, halfwidth} and
/// "epsilon_fraction". Any command takes "field_out" (ground-state CSV).
struct RunConfig {
  Command command = Command::bound2d;
  StripProblem problem;
  int ns = 64;
  int nt = 32;
  int trials = 1000;
  double I_lo = 0.0, I_hi = 0.0;
  double neg_center = 0.0, neg_halfwidth = 1.0;
  double epsilon_fraction = 0.5;
  std::optional<std::string> field_out;
};

/// A single profile object in the config syntax, e.g.
/// {"type": "bump", "amplitude": 0.3, "center": 0, "halfwidth": 1}.
Profile parse_profile(const std::string& json_text, const std::string& name = "kappa");

/// Throws ValidationError naming the offending key.
RunConfig parse_config(const std::string& json_text, Command command);
RunConfig load_config(const std::string& path, Command command);

}  // namespace cstrip
