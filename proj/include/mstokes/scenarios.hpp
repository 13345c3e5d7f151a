#pragma once

#include <string>
#include <vector>

#include "mstokes/config.hpp"
#include "mstokes/csv_io.hpp"
#include "mstokes/dynamics.hpp"
#include "mstokes/stokes_solver.hpp"

namespace mstokes {

// Manufactured unit-square solution: a rotated-gradient (hence divergence
// free) velocity with a zero-mean pressure.
Vec2 manufactured_velocity(const Vec2& x);
double manufactured_pressure(const Vec2& x);
Vec2 manufactured_body_force(const Vec2& x, double nu);
double manufactured_body_force_div(const Vec2& x);

// Boundary/body data implied by the config's flow selection: poiseuille fills
// the inlet and outlet faces only, couette drives the whole outer boundary
// with (gamma * y, 0), manufactured uses the analytic fields above, and
// wall_omega spins a disk-shaped outer boundary about its center.
FlowData make_flow(const SimConfig& cfg);

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<KrylovRow> krylov;
  double order_u = 0.0, order_p = 0.0;
};
// Solves the manufactured case on the unit square at each N (dx = 1/N) and
// fits observed orders by log-log regression.
ConvergenceReport scenario_manufactured(SimConfig cfg, const std::vector<int>& Ns);

struct CouetteReport {
  StokesResult sol;
  double rms_utheta = 0.0;  // deviation from the annular profile A r + B / r
};
// Concentric rotating cylinders: disk outer boundary spinning at wall_omega,
// one prescribed-rotation colloid at the center.
CouetteReport scenario_couette(SimConfig cfg);

struct GapSweepReport {
  std::vector<double> gap;
  std::vector<double> force_mag;   // traction magnitude on the inner cylinder
  std::vector<int> pts_across_gap;
};
// Eccentric configuration of the same pair; the gap starts at a quarter of
// the concentric clearance and halves n_gaps - 1 times, deepening the
// refinement to keep at least four spacings across the gap.
GapSweepReport scenario_gap_sweep(SimConfig cfg, int n_gaps);

struct ChannelReport {
  ForceTorque drag10, drag01, drag11;  // prescribed unit-translation loads
  double linearity_residual = 0.0;
  Vec2 drift_vel{0.0, 0.0};  // free colloid under the poiseuille drive
  double drift_omega = 0.0;
  double free_force_residual = 0.0;   // traction defect of the free solve
  double free_torque_residual = 0.0;
  double balance_residual = 0.0;  // prescribed drag at the drift rates / held-fixed drag
  int dofs = 0;
};
ChannelReport scenario_channel(SimConfig cfg);

enum class OrbitClass { Open, Closed, Undetermined };

struct ShearReport {
  TrajectoryRecord rec;
  OrbitClass cls = OrbitClass::Undetermined;
  double max_antisymmetry = 0.0;  // max over time of |X1 + X2|
};
ShearReport scenario_shear_pair(SimConfig cfg);

struct NotchReport {
  TrajectoryRecord rec;
};
NotchReport scenario_notched_channel(SimConfig cfg);

// Two-colloid orbit classification: closed when the relative position sweeps
// a full turn, open when the x-separation grows monotonically after closest
// approach.
OrbitClass classify_orbit(const TrajectoryRecord& rec);

// Scenario configs with the documented default parameters.
SimConfig default_manufactured_config();
SimConfig default_cylinders_config(double eccentricity);
SimConfig default_channel_config();
SimConfig default_shear_config(bool closed_orbit);
SimConfig default_notch_config();

// CLI entry points: run the scenario and write its outputs (field/cloud/
// trajectory/convergence CSVs, StokesResult summaries as JSON lines, and the
// canonical config echo) under cfg.out_dir.
void run_and_write_converge(const SimConfig& cfg);
void run_and_write_cylinders(const SimConfig& cfg);
void run_and_write_channel(const SimConfig& cfg);
void run_and_write_shear(const SimConfig& cfg);
void run_and_write_notch(const SimConfig& cfg);
void run_and_write_cloud_dump(const SimConfig& cfg, unsigned seed);
void run_and_write_solve_once(const SimConfig& cfg);

}  // namespace mstokes
