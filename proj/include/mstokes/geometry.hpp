#pragma once

#include <cmath>
#include <vector>

#include "mstokes/vec2.hpp"

namespace mstokes {

enum class ColloidShape { Disk, Square };

// Rigid colloid: shape, pose, and (for prescribed-motion solves) its velocity.
struct Colloid {
  ColloidShape shape = ColloidShape::Disk;
  double size = 1.0;   // disk radius, or square side length
  Vec2 pos{0.0, 0.0};
  double theta = 0.0;
  Vec2 vel{0.0, 0.0};  // used in prescribed mode
  double omega = 0.0;  // used in prescribed mode
  bool free = false;   // force-free: rigid-motion rates become unknowns

  // Smallest geometric feature; the boundary spacing must resolve it.
  double min_feature() const { return shape == ColloidShape::Disk ? size : 0.5 * size; }
  // Radius of the circumscribing circle, for cheap overlap rejection.
  double bounding_radius() const {
    return shape == ColloidShape::Disk ? size : 0.70710678118654752440 * size;
  }
};

// Rectangular cavity cut into the bottom wall of a rectangular outer boundary.
struct Notch {
  bool enabled = false;
  double x0 = 0.0;
  double x1 = 0.0;
  double depth = 0.0;
};

struct Geometry {
  enum class Outer { Rect, Disk } outer = Outer::Rect;

  // Rect outer: axis-aligned box [lo.x, lo.x+length] x [lo.y, lo.y+height].
  Vec2 lo{0.0, 0.0};
  double length = 1.0;
  double height = 1.0;
  Notch notch;

  // Disk outer: circle of given radius about disk_center.
  Vec2 disk_center{0.0, 0.0};
  double disk_radius = 1.0;

  std::vector<Colloid> colloids;
};

// Multi-resolution refinement family {dx_inf, M_r, M_l}: level spacings
// dx_i = dx_inf * 2^(i - M_r), colloid boundaries at dx_0.
struct RefinementSpec {
  double dx_inf = 0.1;
  int levels = 1;  // M_r >= 1
  int layers = 1;  // M_l >= 1

  double level_spacing(int i) const { return dx_inf * std::pow(2.0, i - levels); }
  double boundary_spacing() const { return level_spacing(0); }
};

// Ordered closed-curve sample of a colloid boundary.
struct BoundaryCurve {
  std::vector<Vec2> point;
  std::vector<Vec2> normal;   // outward from the colloid, into the fluid
  std::vector<double> arcpos; // arclength parameter along the curve
  double perimeter = 0.0;
};

// CCW polygon of a rectangular outer boundary (with the notch detour if enabled).
std::vector<Vec2> outer_polygon(const Geometry& g);

bool inside_outer(const Geometry& g, const Vec2& p);
double outer_boundary_distance(const Geometry& g, const Vec2& p);

// Signed distance to the colloid surface, positive in the fluid.
double colloid_signed_distance(const Colloid& c, const Vec2& p);
bool inside_colloid(const Colloid& c, const Vec2& p);

// Boundary sampled at spacing <= h with exact normals. Disk rings use an even
// point count so centrally symmetric colloid pairs produce mirror-exact clouds.
BoundaryCurve sample_colloid_boundary(const Colloid& c, double h);

// Closed curve offset outward from the colloid surface by d, sampled at spacing <= h.
std::vector<Vec2> sample_colloid_offset(const Colloid& c, double d, double h);

// Surface-to-surface gap between two colloids (negative if overlapping).
double colloid_gap(const Colloid& a, const Colloid& b);
// Gap between a colloid surface and the outer boundary.
double colloid_wall_gap(const Geometry& g, const Colloid& c);

}  // namespace mstokes
