#include "mstokes/stokes_solver.hpp"

#include <chrono>
#include <cmath>

#include "mstokes/precond.hpp"
#include "mstokes/stencils.hpp"

namespace mstokes {

namespace {
double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

StokesResult solve_stokes(const StokesProblem& prob) {
  return solve_on_cloud(prob, generate_cloud(prob.geom, prob.refine));
}

StokesResult solve_on_cloud(const StokesProblem& prob, PointCloud cloud) {
  compute_supports(cloud, prob.order);
  build_neighbors(cloud);

  BlockSystem sys = assemble(cloud, prob.geom.colloids, prob.order, prob.nu, prob.flow);

  auto t0 = std::chrono::steady_clock::now();
  BlockPrecond M(sys.K, sys.G, sys.B, sys.L, sys.vel_component, prob.amg);
  double setup_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  auto apply_A = [&sys](const Eigen::VectorXd& v) { return sys.apply(v); };
  auto apply_M = [&M](const Eigen::VectorXd& r) { return M.apply(r); };
  Eigen::VectorXd b = sys.rhs();
  KrylovReport rep;
  Eigen::VectorXd x = gmres(apply_A, apply_M, b, prob.linear, &rep);
  if (!rep.converged && prob.linear.restart < prob.linear.max_iter) {
    // Restarting can cycle on tight colloid configurations even though the
    // unrestarted iteration converges. Widen the window to the full budget and
    // continue from the current iterate before reporting failure.
    Eigen::VectorXd r0 = b - sys.apply(x);
    GmresOptions wide = prob.linear;
    wide.restart = wide.max_iter;
    wide.tol = prob.linear.tol * b.norm() / std::max(r0.norm(), 1e-300);
    KrylovReport rep2;
    x += gmres(apply_A, apply_M, r0, wide, &rep2);
    rep.iterations += rep2.iterations;
    rep.rel_residual = rep2.rel_residual * r0.norm() / b.norm();
    rep.converged = rep.rel_residual <= prob.linear.tol;
    rep.history.insert(rep.history.end(), rep2.history.begin(), rep2.history.end());
  }
  rep.solve_seconds = seconds_since(t0);
  rep.setup_seconds = setup_s;
  rep.coarse_fallback = M.coarse_fallback();
  rep.dominance_pressure = M.dominance_pressure();
  rep.dominance_schur = M.dominance_schur();

  StokesResult res;
  const DofMap& d = sys.dofs;
  const int N = cloud.n();
  res.u = x.head(2 * N);
  res.p = x.segment(d.n_u(), N);
  res.lambda = x[d.lam()];
  res.report = rep;

  res.colloid_vel.resize(prob.geom.colloids.size());
  res.colloid_omega.resize(prob.geom.colloids.size());
  for (std::size_t c = 0; c < prob.geom.colloids.size(); ++c) {
    if (prob.geom.colloids[c].free) {
      res.colloid_vel[c] = {x[d.mode((int)c, 0)], x[d.mode((int)c, 1)]};
      res.colloid_omega[c] = x[d.mode((int)c, 2)];
    } else {
      res.colloid_vel[c] = prob.geom.colloids[c].vel;
      res.colloid_omega[c] = prob.geom.colloids[c].omega;
    }
  }

  if (prob.divergence_check) {
    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
      if (cloud.is_boundary(i)) continue;
      StaggeredVectorOps ops = staggered_vector_ops(cloud, i, std::max(prob.order, 2));
      Eigen::VectorXd uloc(2 * ops.div.cols.size());
      for (std::size_t k = 0; k < ops.div.cols.size(); ++k) {
        uloc[2 * k] = res.u[2 * ops.div.cols[k]];
        uloc[2 * k + 1] = res.u[2 * ops.div.cols[k] + 1];
      }
      worst = std::max(worst, std::abs((ops.div.w * uloc)(0)));
    }
    res.max_divergence = worst;
  }

  res.cloud = std::move(cloud);
  return res;
}

}  // namespace mstokes
