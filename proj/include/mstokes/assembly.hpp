#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mstokes/csr.hpp"
#include "mstokes/geometry.hpp"
#include "mstokes/point_cloud.hpp"

namespace mstokes {

// Unknown layout. Velocity block: (u_x, u_y) interleaved per point, then
// (V_x, V_y, Omega) per free colloid. Pressure block: one dof per point plus
// the mean-constraint multiplier last.
struct DofMap {
  int n = 0;
  int n_free = 0;
  std::vector<int> free_slot;  // colloid index -> free slot, -1 when prescribed

  int n_u() const { return 2 * n + 3 * n_free; }
  int n_p() const { return n + 1; }
  int total() const { return n_u() + n_p(); }

  int ux(int i) const { return 2 * i; }
  int uy(int i) const { return 2 * i + 1; }
  // k: 0 = V_x, 1 = V_y, 2 = Omega
  int mode(int c, int k) const { return 2 * n + 3 * free_slot[c] + k; }
  int p(int i) const { return n_u() + i; }
  int lam() const { return n_u() + n; }
};

DofMap build_dofmap(const PointCloud& pc, const std::vector<Colloid>& colloids);

// Problem data beyond the geometry: body force, its divergence (for the
// pressure equation right-hand side), outer-wall velocity, and optional
// external load per colloid (applies to free colloids).
struct FlowData {
  std::function<Vec2(const Vec2&)> body_force;
  std::function<double(const Vec2&)> body_force_div;
  std::function<Vec2(const Vec2&)> wall_velocity;
  std::vector<Vec2> ext_force;
  std::vector<double> ext_torque;
};

// Monolithic block system [[K, G], [B, L]] [u; p] = [f; g].
//   K: momentum curl-curl rows, Dirichlet rows (scaled nu/eps^2), and the
//      viscous part of the colloid force balance;
//   G: pressure gradient and the pressure part of the force balance;
//   B: velocity coupling of the pressure-Neumann constraint on boundary rows;
//   L: staggered pressure Laplacian bordered by the mean constraint.
struct BlockSystem {
  DofMap dofs;
  double nu = 1.0;
  Csr K, G, B, L;
  Eigen::VectorXd f, g;
  std::vector<int> vel_component;  // aggregation components for the velocity block

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd rhs() const;
};

BlockSystem assemble(const PointCloud& pc, const std::vector<Colloid>& colloids,
                     int order, double nu, const FlowData& flow);

// Midpoint quadrature weights along the boundary loop of colloid c: half the
// arclength to each neighbor along the loop. Sums exactly to the perimeter.
std::vector<double> arclength_weights(const PointCloud& pc, int c);

struct ForceTorque {
  Vec2 force{0.0, 0.0};
  double torque = 0.0;
};

// Hydrodynamic surface load on colloid c from a solved field: quadrature of
// the reconstructed traction sigma* n over the boundary loop, torque about the
// colloid center. `u` holds 2N point velocities, `p` holds N point pressures.
ForceTorque surface_traction(const PointCloud& pc, const std::vector<Colloid>& colloids,
                             int order, double nu, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& p, int c);

}  // namespace mstokes
