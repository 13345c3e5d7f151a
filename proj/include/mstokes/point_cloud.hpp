#pragma once

#include <vector>

#include "mstokes/geometry.hpp"
#include "mstokes/kdtree.hpp"
#include "mstokes/vec2.hpp"

namespace mstokes {

// Region tags: colloid boundary points carry the colloid index (>= 0).
constexpr int kInterior = -1;
constexpr int kWall = -2;

inline int poly_dim(int m) { return (m + 1) * (m + 2) / 2; }
inline int divfree_dim(int m) { return (m + 2) * (m + 3) / 2 - 1; }

struct PointCloud {
  std::vector<Vec2> pos;
  std::vector<Vec2> normal;     // zero at interior points; at colloid points outward from the colloid
  std::vector<int> region;
  std::vector<double> spacing;  // lengthscale the point was generated at
  std::vector<double> eps;      // support radius, filled by compute_supports
  std::vector<std::vector<int>> neigh;  // symmetric adjacency, filled by build_neighbors

  // Ordered boundary loops per colloid, for quadrature along the surface.
  std::vector<std::vector<int>> colloid_pts;
  std::vector<std::vector<double>> colloid_arcpos;
  std::vector<double> colloid_perimeter;

  double dx_inf = 0.0;           // coarse spacing of the generating refinement family
  double dx0 = 0.0;              // colloid boundary spacing
  double dx_inf_measured = 0.0;  // sup_i min_{j != i} |x_i - x_j|

  KdTree tree;  // built by compute_supports

  int n() const { return (int)pos.size(); }
  bool is_boundary(int i) const { return region[i] != kInterior; }
};

// Quartic bump kernel, support radius e.
inline double kernel(double r, double e) {
  double t = 1.0 - r / e;
  if (t <= 0.0) return 0.0;
  double t2 = t * t;
  return t2 * t2;
}

// Symmetric pair weight W_ij = W_{eps_i}(r) + W_{eps_j}(r).
inline double pair_weight(const PointCloud& pc, int i, int j) {
  double r = dist(pc.pos[i], pc.pos[j]);
  return kernel(r, pc.eps[i]) + kernel(r, pc.eps[j]);
}

// Multi-resolution cloud: colloid boundaries at dx0, nested layers marching
// outward with doubling spacing, Cartesian fill at dx_inf, outer boundary
// perimeter at dx_inf.
PointCloud generate_cloud(const Geometry& g, const RefinementSpec& refine);

// Support radii: eps_i = 1.5 x (distance to the dim(pi_m)-th nearest neighbor).
void compute_supports(PointCloud& pc, int order);

// N(i) = { j != i : W_ij > 0 }; symmetric by construction of the pair weight.
void build_neighbors(PointCloud& pc);

}  // namespace mstokes
