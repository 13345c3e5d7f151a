#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mstokes/config.hpp"
#include "mstokes/errors.hpp"
#include "mstokes/scenarios.hpp"

namespace {

// Shared flags override whatever the config file (or scenario default) set.
struct Overrides {
  std::string config_path;
  std::string out_dir;
  int order = 0;
  double dt = 0.0;
  int steps = -1;
  unsigned seed = 0;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "configuration file");
  cmd->add_option("--out", ov.out_dir, "output directory");
  cmd->add_option("--order", ov.order, "reconstruction order")
      ->check(CLI::IsMember({2, 4}));
  cmd->add_option("--dt", ov.dt, "time step");
  cmd->add_option("--steps", ov.steps, "number of steps");
  cmd->add_option("--seed", ov.seed, "jitter seed for randomized test clouds");
}

mstokes::SimConfig resolve(const Overrides& ov, mstokes::SimConfig fallback) {
  mstokes::SimConfig cfg = ov.config_path.empty()
                               ? std::move(fallback)
                               : mstokes::parse_config_file(ov.config_path);
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (ov.order != 0) cfg.order = ov.order;
  if (ov.dt > 0.0) cfg.dt = ov.dt;
  if (ov.steps >= 0) cfg.steps = ov.steps;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meshless Stokes solver with suspended colloids"};
  app.require_subcommand(1);

  Overrides ov;
  auto* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  auto* cylinders = app.add_subcommand("cylinders", "rotating cylinder pair");
  auto* channel = app.add_subcommand("channel", "channel flow past a disk");
  auto* shear = app.add_subcommand("shear", "two freely suspended disks in shear");
  auto* notch = app.add_subcommand("notch", "square colloid through a notched channel");
  auto* cloud = app.add_subcommand("cloud-dump", "generate and write the point cloud only");
  auto* once = app.add_subcommand("solve-once", "single steady solve of the configured problem");
  for (auto* c : {converge, cylinders, channel, shear, notch, cloud, once})
    add_common(c, ov);
  bool closed_orbit = false;
  shear->add_flag("--closed", closed_orbit, "use the closed-orbit initial condition");
  double eccentricity = 0.0;
  cylinders->add_option("--eccentricity", eccentricity, "inner cylinder offset");

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace mstokes;
    if (converge->parsed()) {
      run_and_write_converge(resolve(ov, default_manufactured_config()));
    } else if (cylinders->parsed()) {
      run_and_write_cylinders(resolve(ov, default_cylinders_config(eccentricity)));
    } else if (channel->parsed()) {
      run_and_write_channel(resolve(ov, default_channel_config()));
    } else if (shear->parsed()) {
      run_and_write_shear(resolve(ov, default_shear_config(closed_orbit)));
    } else if (notch->parsed()) {
      run_and_write_notch(resolve(ov, default_notch_config()));
    } else if (cloud->parsed()) {
      run_and_write_cloud_dump(resolve(ov, default_channel_config()), ov.seed);
    } else if (once->parsed()) {
      run_and_write_solve_once(resolve(ov, default_manufactured_config()));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
