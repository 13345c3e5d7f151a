#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mstokes/amg.hpp"
#include "mstokes/assembly.hpp"
#include "mstokes/geometry.hpp"
#include "mstokes/gmres.hpp"
#include "mstokes/point_cloud.hpp"

namespace mstokes {

struct StokesProblem {
  Geometry geom;
  RefinementSpec refine;
  int order = 2;
  double nu = 1.0;
  FlowData flow;
  GmresOptions linear;
  AmgOptions amg;
  bool divergence_check = false;  // staggered-divergence diagnostic after the solve
};

struct StokesResult {
  PointCloud cloud;
  Eigen::VectorXd u;  // 2N interleaved point velocities
  Eigen::VectorXd p;  // N point pressures, discrete mean pinned to zero
  double lambda = 0.0;
  std::vector<Vec2> colloid_vel;     // resolved rates; prescribed values echoed
  std::vector<double> colloid_omega;
  KrylovReport report;
  double max_divergence = 0.0;
};

// Full pipeline: cloud generation, supports, stencils, monolithic assembly,
// Schur-preconditioned GMRES, extraction.
StokesResult solve_stokes(const StokesProblem& prob);

// Same, on a cloud that is already generated (supports and adjacency are
// recomputed for the requested order).
StokesResult solve_on_cloud(const StokesProblem& prob, PointCloud cloud);

}  // namespace mstokes
