#include "mstokes/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

Vec2 rotate(const Vec2& v, double c, double s) { return {c * v.x - s * v.y, s * v.x + c * v.y}; }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double t = ab.norm2() > 0.0 ? (p - a).dot(ab) / ab.norm2() : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + ab * t);
}

// Body-frame corners in CCW order; edge k runs corner k -> corner k+1.
void square_corners(double half, Vec2 c[4]) {
  c[0] = {half, half};
  c[1] = {-half, half};
  c[2] = {-half, -half};
  c[3] = {half, -half};
}

}  // namespace

std::vector<Vec2> outer_polygon(const Geometry& g) {
  std::vector<Vec2> poly;
  double x0 = g.lo.x, y0 = g.lo.y, x1 = g.lo.x + g.length, y1 = g.lo.y + g.height;
  poly.push_back({x0, y0});
  if (g.notch.enabled && g.notch.depth > 0.0) {
    poly.push_back({g.notch.x0, y0});
    poly.push_back({g.notch.x0, y0 - g.notch.depth});
    poly.push_back({g.notch.x1, y0 - g.notch.depth});
    poly.push_back({g.notch.x1, y0});
  }
  poly.push_back({x1, y0});
  poly.push_back({x1, y1});
  poly.push_back({x0, y1});
  return poly;
}

bool inside_outer(const Geometry& g, const Vec2& p) {
  if (g.outer == Geometry::Outer::Disk) return dist(p, g.disk_center) < g.disk_radius;
  bool in_main = p.x > g.lo.x && p.x < g.lo.x + g.length && p.y > g.lo.y && p.y < g.lo.y + g.height;
  if (in_main) return true;
  if (g.notch.enabled && g.notch.depth > 0.0)
    return p.x > g.notch.x0 && p.x < g.notch.x1 && p.y > g.lo.y - g.notch.depth && p.y <= g.lo.y;
  return false;
}

double outer_boundary_distance(const Geometry& g, const Vec2& p) {
  if (g.outer == Geometry::Outer::Disk) return std::abs(g.disk_radius - dist(p, g.disk_center));
  std::vector<Vec2> poly = outer_polygon(g);
  double d = std::numeric_limits<double>::max();
  for (std::size_t k = 0; k < poly.size(); ++k)
    d = std::min(d, point_segment_distance(p, poly[k], poly[(k + 1) % poly.size()]));
  return d;
}

double colloid_signed_distance(const Colloid& c, const Vec2& p) {
  if (c.shape == ColloidShape::Disk) return dist(p, c.pos) - c.size;
  double co = std::cos(-c.theta), si = std::sin(-c.theta);
  Vec2 q = rotate(p - c.pos, co, si);
  double half = 0.5 * c.size;
  double ax = std::abs(q.x) - half, ay = std::abs(q.y) - half;
  if (ax > 0.0 && ay > 0.0) return std::sqrt(ax * ax + ay * ay);
  return std::max(ax, ay);
}

bool inside_colloid(const Colloid& c, const Vec2& p) { return colloid_signed_distance(c, p) < 0.0; }

BoundaryCurve sample_colloid_boundary(const Colloid& c, double h) {
  if (h <= 0.0) throw GeometryError("sample_colloid_boundary: spacing must be positive");
  BoundaryCurve out;
  if (c.shape == ColloidShape::Disk) {
    double perim = 2.0 * M_PI * c.size;
    // even count keeps the ring invariant under point reflection through the center
    int n = 2 * std::max(2, (int)std::ceil(0.5 * perim / h));
    out.perimeter = perim;
    for (int k = 0; k < n; ++k) {
      double phi = c.theta + 2.0 * M_PI * k / n;
      Vec2 nrm{std::cos(phi), std::sin(phi)};
      out.point.push_back(c.pos + nrm * c.size);
      out.normal.push_back(nrm);
      out.arcpos.push_back(perim * k / n);
    }
    return out;
  }
  // square: corners included once, bisector normals at corners
  double half = 0.5 * c.size;
  Vec2 corner[4];
  square_corners(half, corner);
  Vec2 edge_nrm[4] = {{0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}};
  double co = std::cos(c.theta), si = std::sin(c.theta);
  int ne = std::max(1, (int)std::ceil(c.size / h));
  out.perimeter = 4.0 * c.size;
  for (int e = 0; e < 4; ++e) {
    Vec2 a = corner[e], b = corner[(e + 1) % 4];
    for (int k = 0; k < ne; ++k) {
      double t = (double)k / ne;
      Vec2 q = a + (b - a) * t;
      Vec2 nrm = k == 0 ? (edge_nrm[(e + 3) % 4] + edge_nrm[e]).normalized() : edge_nrm[e];
      out.point.push_back(c.pos + rotate(q, co, si));
      out.normal.push_back(rotate(nrm, co, si));
      out.arcpos.push_back(c.size * (e + t));
    }
  }
  return out;
}

std::vector<Vec2> sample_colloid_offset(const Colloid& c, double d, double h) {
  std::vector<Vec2> out;
  if (c.shape == ColloidShape::Disk) {
    double r = c.size + d;
    int n = 2 * std::max(2, (int)std::ceil(M_PI * r / h));
    for (int k = 0; k < n; ++k) {
      double phi = c.theta + 2.0 * M_PI * k / n;
      out.push_back(c.pos + Vec2{std::cos(phi), std::sin(phi)} * r);
    }
    return out;
  }
  // rounded rectangle: offset edges joined by quarter arcs at the corners
  double half = 0.5 * c.size;
  Vec2 corner[4];
  square_corners(half, corner);
  Vec2 edge_nrm[4] = {{0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}, {1.0, 0.0}};
  double co = std::cos(c.theta), si = std::sin(c.theta);
  int ns = std::max(1, (int)std::ceil(c.size / h));
  int na = std::max(1, (int)std::ceil(0.5 * M_PI * d / h));
  for (int e = 0; e < 4; ++e) {
    Vec2 a = corner[e] + edge_nrm[e] * d, b = corner[(e + 1) % 4] + edge_nrm[e] * d;
    for (int k = 0; k < ns; ++k)
      out.push_back(c.pos + rotate(a + (b - a) * ((double)k / ns), co, si));
    double a0 = std::atan2(edge_nrm[e].y, edge_nrm[e].x);
    for (int k = 0; k < na; ++k) {
      double phi = a0 + 0.5 * M_PI * k / na;
      out.push_back(c.pos + rotate(corner[(e + 1) % 4] + Vec2{std::cos(phi), std::sin(phi)} * d, co, si));
    }
  }
  return out;
}

double colloid_gap(const Colloid& a, const Colloid& b) {
  if (a.shape == ColloidShape::Disk && b.shape == ColloidShape::Disk)
    return dist(a.pos, b.pos) - a.size - b.size;
  double fine = std::min(a.min_feature(), b.min_feature()) / 64.0;
  double gap = std::numeric_limits<double>::max();
  for (const Vec2& p : sample_colloid_boundary(a, fine).point)
    gap = std::min(gap, colloid_signed_distance(b, p));
  for (const Vec2& p : sample_colloid_boundary(b, fine).point)
    gap = std::min(gap, colloid_signed_distance(a, p));
  return gap;
}

double colloid_wall_gap(const Geometry& g, const Colloid& c) {
  if (c.shape == ColloidShape::Disk) {
    if (g.outer == Geometry::Outer::Disk)
      return g.disk_radius - dist(c.pos, g.disk_center) - c.size;
    return outer_boundary_distance(g, c.pos) - c.size;
  }
  double fine = c.min_feature() / 64.0;
  double gap = std::numeric_limits<double>::max();
  for (const Vec2& p : sample_colloid_boundary(c, fine).point)
    gap = std::min(gap, outer_boundary_distance(g, p));
  return gap;
}

}  // namespace mstokes
