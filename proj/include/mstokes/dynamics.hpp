#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mstokes/stokes_solver.hpp"

namespace mstokes {

// Predictor-corrector pairs (PECE, two rate evaluations per step).
//   Ab2Trapezoid: Adams-Bashforth-2 predictor (3F.n - F.n-1)/2 with a
//     trapezoidal corrector; second order, one-step error ratio 8 under
//     step halving.
//   MoultonPC: difference predictor 3(F.n - F.n-1)/2 with the two-step
//     Adams-Moulton corrector (5F* + 8F.n - F.n-1)/12; exact for constant
//     rates but first order on general ones, kept selectable for comparison.
// Both bootstrap the first step with a forward-Euler predictor and
// trapezoidal corrector.
enum class SchemeKind { Ab2Trapezoid, MoultonPC };

using RateFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

class Integrator {
 public:
  explicit Integrator(SchemeKind scheme = SchemeKind::Ab2Trapezoid) : scheme_(scheme) {}

  // Advance X by one step; stores F(X) into rate_out when given.
  Eigen::VectorXd step(const Eigen::VectorXd& X, double dt, const RateFn& F,
                       Eigen::VectorXd* rate_out = nullptr);

  void reset() { have_prev_ = false; }
  SchemeKind scheme() const { return scheme_; }

 private:
  SchemeKind scheme_;
  bool have_prev_ = false;
  Eigen::VectorXd F_prev_;
};

struct DynamicsConfig {
  double dt = 0.1;
  int steps = 10;
  SchemeKind scheme = SchemeKind::Ab2Trapezoid;
  double min_gap_factor = 4.0;  // abort when a surface gap falls under factor * dx0
  int max_levels = 9;           // cap for automatic refinement deepening
};

// State and rates per free colloid at each accepted step, including t = 0,
// with the worst per-step solver and constraint diagnostics.
struct TrajectoryRecord {
  std::vector<int> colloid;  // indices of the advanced colloids
  std::vector<double> time;
  std::vector<std::vector<Vec2>> pos;    // [step][free colloid]
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<Vec2>> vel;
  std::vector<std::vector<double>> omega;

  std::vector<int> iters;               // worst Krylov iterations over the step's solves
  std::vector<double> rel_residual;     // worst final relative residual
  std::vector<double> force_residual;   // worst free-colloid force-balance defect
  std::vector<double> torque_residual;  // worst free-colloid torque-balance defect
};

// Advances the free colloids of base.geom quasi-statically: each rate
// evaluation regenerates the point cloud for the current poses (deepening the
// refinement to keep at least five spacings across the narrowest gap) and
// solves the monolithic system for the rigid-motion rates.
TrajectoryRecord evolve_colloids(const StokesProblem& base, const DynamicsConfig& cfg);

}  // namespace mstokes
