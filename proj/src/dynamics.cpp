#include "mstokes/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mstokes/errors.hpp"

namespace mstokes {

Eigen::VectorXd Integrator::step(const Eigen::VectorXd& X, double dt, const RateFn& F,
                                 Eigen::VectorXd* rate_out) {
  Eigen::VectorXd Fn = F(X);
  if (rate_out) *rate_out = Fn;

  Eigen::VectorXd Xs, Xn1;
  if (!have_prev_) {
    Xs = X + dt * Fn;
    Eigen::VectorXd Fs = F(Xs);
    Xn1 = X + (dt / 2.0) * (Fs + Fn);
  } else if (scheme_ == SchemeKind::Ab2Trapezoid) {
    Xs = X + (dt / 2.0) * (3.0 * Fn - F_prev_);
    Eigen::VectorXd Fs = F(Xs);
    Xn1 = X + (dt / 2.0) * (Fs + Fn);
  } else {
    Xs = X + (dt / 2.0) * (3.0 * Fn - 3.0 * F_prev_);
    Eigen::VectorXd Fs = F(Xs);
    Xn1 = X + (dt / 12.0) * (5.0 * Fs + 8.0 * Fn - F_prev_);
  }

  F_prev_ = Fn;
  have_prev_ = true;
  return Xn1;
}

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

double wrap_angle(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

std::vector<int> free_indices(const Geometry& g) {
  std::vector<int> ids;
  for (std::size_t c = 0; c < g.colloids.size(); ++c)
    if (g.colloids[c].free) ids.push_back((int)c);
  return ids;
}

void apply_state(Geometry& g, const std::vector<int>& ids, const Eigen::VectorXd& X) {
  for (std::size_t k = 0; k < ids.size(); ++k) {
    Colloid& c = g.colloids[ids[k]];
    c.pos = {X[3 * k], X[3 * k + 1]};
    c.theta = wrap_angle(X[3 * k + 2]);
  }
}

double min_surface_gap(const Geometry& g) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < g.colloids.size(); ++a) {
    gap = std::min(gap, colloid_wall_gap(g, g.colloids[a]));
    for (std::size_t b = a + 1; b < g.colloids.size(); ++b)
      gap = std::min(gap, colloid_gap(g.colloids[a], g.colloids[b]));
  }
  return gap;
}

}  // namespace

TrajectoryRecord evolve_colloids(const StokesProblem& base, const DynamicsConfig& cfg) {
  std::vector<int> ids = free_indices(base.geom);
  if (ids.empty()) throw SetupError("no free colloids to advance");

  struct StepDiag {
    int iters = 0;
    double rel_res = 0.0, force = 0.0, torque = 0.0;
  } diag;

  // Rate of change of (X, Y, Theta) per free colloid at the given poses.
  auto rate = [&](const Eigen::VectorXd& X) -> Eigen::VectorXd {
    StokesProblem prob = base;
    apply_state(prob.geom, ids, X);

    double gap = min_surface_gap(prob.geom);
    if (!(gap > 0.0))
      throw ResolutionError("colloid surfaces touched during evolution");
    // Keep at least five spacings across the narrowest gap, up to the cap.
    int levels = prob.refine.levels;
    while (levels < cfg.max_levels &&
           prob.refine.dx_inf * std::pow(2.0, -levels) > gap / 5.0)
      ++levels;
    prob.refine.levels = levels;
    if (gap < cfg.min_gap_factor * prob.refine.boundary_spacing())
      throw ResolutionError("gap of " + std::to_string(gap) +
                            " is under the resolvable limit at refinement cap");

    StokesResult res = solve_stokes(prob);
    // A stagnated solve feeds unphysical rates straight into the trajectory,
    // so treat it as fatal rather than integrating garbage.
    if (!res.report.converged)
      throw SetupError("stokes solve stagnated at relative residual " +
                       std::to_string(res.report.rel_residual) +
                       " during colloid evolution");
    Eigen::VectorXd F(3 * ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      F[3 * k] = res.colloid_vel[ids[k]].x;
      F[3 * k + 1] = res.colloid_vel[ids[k]].y;
      F[3 * k + 2] = res.colloid_omega[ids[k]];
    }

    diag.iters = std::max(diag.iters, res.report.iterations);
    diag.rel_res = std::max(diag.rel_res, res.report.rel_residual);
    for (int c : ids) {
      ForceTorque ft = surface_traction(res.cloud, prob.geom.colloids, prob.order,
                                        prob.nu, res.u, res.p, c);
      Vec2 fe = (std::size_t)c < prob.flow.ext_force.size() ? prob.flow.ext_force[c]
                                                            : Vec2{0.0, 0.0};
      double te = (std::size_t)c < prob.flow.ext_torque.size() ? prob.flow.ext_torque[c]
                                                               : 0.0;
      diag.force = std::max(diag.force, (ft.force + fe).norm());
      diag.torque = std::max(diag.torque, std::abs(ft.torque + te));
    }
    return F;
  };

  Eigen::VectorXd X(3 * ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Colloid& c = base.geom.colloids[ids[k]];
    X[3 * k] = c.pos.x;
    X[3 * k + 1] = c.pos.y;
    X[3 * k + 2] = c.theta;
  }

  TrajectoryRecord rec;
  rec.colloid = ids;
  Integrator integ(cfg.scheme);

  auto record = [&](double t, const Eigen::VectorXd& Xc, const Eigen::VectorXd& Fc) {
    rec.time.push_back(t);
    std::vector<Vec2> p(ids.size()), v(ids.size());
    std::vector<double> th(ids.size()), om(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      p[k] = {Xc[3 * k], Xc[3 * k + 1]};
      th[k] = wrap_angle(Xc[3 * k + 2]);
      v[k] = {Fc[3 * k], Fc[3 * k + 1]};
      om[k] = Fc[3 * k + 2];
    }
    rec.pos.push_back(std::move(p));
    rec.theta.push_back(std::move(th));
    rec.vel.push_back(std::move(v));
    rec.omega.push_back(std::move(om));
    rec.iters.push_back(diag.iters);
    rec.rel_residual.push_back(diag.rel_res);
    rec.force_residual.push_back(diag.force);
    rec.torque_residual.push_back(diag.torque);
    diag = StepDiag{};
  };

  for (int s = 0; s < cfg.steps; ++s) {
    Eigen::VectorXd Fn;
    Eigen::VectorXd Xn1 = integ.step(X, cfg.dt, rate, &Fn);
    record(s * cfg.dt, X, Fn);
    X = Xn1;
  }
  // Final state with its rates.
  Eigen::VectorXd Ffinal = rate(X);
  record(cfg.steps * cfg.dt, X, Ffinal);
  return rec;
}

}  // namespace mstokes
