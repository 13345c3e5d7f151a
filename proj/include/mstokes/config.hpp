#pragma once

#include <string>

#include "mstokes/dynamics.hpp"
#include "mstokes/geometry.hpp"

namespace mstokes {

enum class FlowKind { None, Poiseuille, Couette, Manufactured };

// Parsed scenario configuration. The file format is INI-style: `[section]`
// headers, `key = value` lines, `#` comments; `[colloid]` may repeat, one
// section per colloid. See the README for the full schema.
struct SimConfig {
  double nu = 0.0;  // required, positive
  int order = 2;

  RefinementSpec refine;
  Geometry geom;
  double wall_omega = 0.0;  // rotation rate of a disk-shaped outer boundary

  FlowKind flow = FlowKind::None;
  double flow_u = 0.0;      // poiseuille centerline speed
  double flow_gamma = 0.0;  // couette shear rate

  double dt = 0.1;
  int steps = 10;
  SchemeKind scheme = SchemeKind::Ab2Trapezoid;

  double lin_tol = 1e-8;
  int max_iter = 500;
  int restart = 200;

  std::string out_dir = "out";
};

SimConfig parse_config_text(const std::string& text);
SimConfig parse_config_file(const std::string& path);

// Canonical round-trip form: parsing the emitted text reproduces the config
// exactly (17 significant digits on all reals).
std::string emit_config(const SimConfig& cfg);

}  // namespace mstokes
