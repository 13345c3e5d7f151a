#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mstokes/basis.hpp"
#include "mstokes/point_cloud.hpp"
#include "mstokes/wls.hpp"

namespace mstokes {

// Rows of a local linear operator over the points in `cols` (center first).
// Scalar-data stencils have one column per point; vector-data stencils have
// two (x then y component). When a Neumann constraint participates, beta
// holds each row's coefficient on the constraint data g_i.
struct Stencil {
  int center = -1;
  std::vector<int> cols;
  Eigen::MatrixXd w;
  Eigen::VectorXd beta;

  // Apply to a scalar field given per-point values aligned with cols.
  Eigen::VectorXd apply(const Eigen::VectorXd& values) const { return w * values; }
};

enum class ScalarOp { Value, Grad, Laplacian, Hessian };

// Standard MLS reconstruction over {i} u N(i); exact on pi_m.
Stencil standard_mls_stencil(const PointCloud& pc, int i, int m, ScalarOp op);

struct StaggeredStencils {
  Stencil grad;  // 2 rows
  Stencil lap;   // 1 row
};

// Staggered operators built from edge differences phi_j - phi_i collocated at
// edge midpoints. With neumann=true (boundary points only) the reconstruction
// is constrained to (1/2) grad p*(x_i) . n = g_i and the rows gain beta
// coefficients multiplying g_i.
StaggeredStencils staggered_stencil(const PointCloud& pc, int i, int m, bool neumann);

struct StaggeredVectorOps {
  Stencil recon;  // 2 rows over velocity dofs
  Stencil div;    // 1 row over velocity dofs
};

// Staggered treatment of vector fields through radial components
// u(x) . 2(x - x_i) sampled on edge midpoints; divergence diagnostic.
StaggeredVectorOps staggered_vector_ops(const PointCloud& pc, int i, int m);

// curl(curl(u)) at x_i from a divergence-free MLS fit; 2 rows over velocity
// dofs of {i} u N(i). Exact on divergence-free polynomial fields of degree <= m.
Stencil curlcurl_stencil(const PointCloud& pc, int i, int m);

// Stress reconstruction sigma* = -q* I + (nu/2)(grad v* + grad v*') at a
// boundary point: q* from a standard scalar fit of pressure, v* from a
// divergence-free fit of velocity. Rows: xx, xy, yx, yy.
struct StressStencil {
  int center = -1;
  std::vector<int> cols;
  Eigen::MatrixXd wp;  // 4 x n over pressure dofs
  Eigen::MatrixXd wu;  // 4 x 2n over velocity dofs
};
StressStencil stress_stencil(const PointCloud& pc, int i, int m, double nu);

}  // namespace mstokes
