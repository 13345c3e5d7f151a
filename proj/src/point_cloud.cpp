#include "mstokes/point_cloud.hpp"

#include <algorithm>
#include <cmath>

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

struct Builder {
  const Geometry& geom;
  const RefinementSpec& ref;
  PointCloud pc;
  KdTree placed_tree;  // rebuilt before each wave

  Builder(const Geometry& g, const RefinementSpec& r) : geom(g), ref(r) {}

  void add(const Vec2& p, const Vec2& nrm, int region, double spacing) {
    pc.pos.push_back(p);
    pc.normal.push_back(nrm);
    pc.region.push_back(region);
    pc.spacing.push_back(spacing);
  }

  // Candidate culled if an already placed point sits closer than half the
  // finer of the two generation spacings.
  bool crowded(const Vec2& p, double spacing) const {
    std::vector<int> hits;
    placed_tree.radius_query(p, 0.5 * spacing, hits);
    for (int j : hits)
      if (dist(p, pc.pos[j]) < 0.5 * std::min(spacing, pc.spacing[j])) return true;
    return false;
  }

  void begin_wave() { placed_tree = KdTree(pc.pos); }

  void outer_boundary() {
    double h = ref.dx_inf;
    if (geom.outer == Geometry::Outer::Disk) {
      double r = geom.disk_radius;
      int n = 2 * std::max(2, (int)std::ceil(M_PI * r / h));
      for (int k = 0; k < n; ++k) {
        double phi = 2.0 * M_PI * k / n;
        Vec2 nrm{std::cos(phi), std::sin(phi)};
        add(geom.disk_center + nrm * r, nrm, kWall, h);
      }
      return;
    }
    std::vector<Vec2> poly = outer_polygon(geom);
    std::size_t nv = poly.size();
    std::vector<Vec2> enrm(nv);
    for (std::size_t e = 0; e < nv; ++e) {
      Vec2 d = poly[(e + 1) % nv] - poly[e];
      enrm[e] = Vec2{d.y, -d.x}.normalized();  // outward for a CCW polygon
    }
    for (std::size_t e = 0; e < nv; ++e) {
      Vec2 a = poly[e], b = poly[(e + 1) % nv];
      int ne = std::max(1, (int)std::ceil(dist(a, b) / h));
      for (int k = 0; k < ne; ++k) {
        Vec2 nrm = k == 0 ? (enrm[(e + nv - 1) % nv] + enrm[e]).normalized() : enrm[e];
        add(a + (b - a) * ((double)k / ne), nrm, kWall, h);
      }
    }
  }

  void colloid_boundaries() {
    double dx0 = ref.boundary_spacing();
    for (std::size_t c = 0; c < geom.colloids.size(); ++c) {
      const Colloid& col = geom.colloids[c];
      BoundaryCurve curve = sample_colloid_boundary(col, dx0);
      std::vector<int> ids;
      for (std::size_t k = 0; k < curve.point.size(); ++k) {
        const Vec2& p = curve.point[k];
        if (!inside_outer(geom, p))
          throw GeometryError("colloid " + std::to_string(c) + " crosses the outer boundary");
        for (std::size_t c2 = 0; c2 < geom.colloids.size(); ++c2)
          if (c2 != c && inside_colloid(geom.colloids[c2], p))
            throw GeometryError("colloids " + std::to_string(c) + " and " + std::to_string(c2) +
                                " overlap");
        ids.push_back(pc.n());
        add(p, curve.normal[k], (int)c, dx0);
      }
      pc.colloid_pts.push_back(ids);
      pc.colloid_arcpos.push_back(curve.arcpos);
      pc.colloid_perimeter.push_back(curve.perimeter);
    }
  }

  // Cumulative layer-band thickness through level i.
  double band_thickness(int level) const {
    double t = 0.0;
    for (int i = 1; i <= level; ++i) t += ref.layers * ref.level_spacing(i);
    return t;
  }

  void layer_waves() {
    std::vector<double> offset(geom.colloids.size(), 0.0);
    for (int lvl = 1; lvl <= ref.levels; ++lvl) {
      double h = ref.level_spacing(lvl);
      double finer_band = band_thickness(lvl - 1);
      for (int layer = 0; layer < ref.layers; ++layer) {
        begin_wave();
        std::vector<Vec2> cand;
        std::vector<int> cand_col;
        for (std::size_t c = 0; c < geom.colloids.size(); ++c) {
          offset[c] += h;
          for (const Vec2& p : sample_colloid_offset(geom.colloids[c], offset[c], h)) {
            if (!inside_outer(geom, p)) continue;
            bool drop = false;
            for (std::size_t c2 = 0; c2 < geom.colloids.size() && !drop; ++c2) {
              if (c2 == c) continue;
              // skip points inside another colloid or its more refined band
              if (colloid_signed_distance(geom.colloids[c2], p) < finer_band) drop = true;
            }
            if (drop || crowded(p, h)) continue;
            cand.push_back(p);
            cand_col.push_back((int)c);
          }
        }
        // Where waves of two colloids meet, cull close cross-colloid pairs
        // mutually so the outcome does not depend on colloid order.
        KdTree cand_tree(cand);
        std::vector<int> hits;
        for (std::size_t k = 0; k < cand.size(); ++k) {
          cand_tree.radius_query(cand[k], 0.5 * h, hits);
          bool drop = false;
          for (int j : hits)
            if (cand_col[j] != cand_col[k]) {
              drop = true;
              break;
            }
          if (!drop) add(cand[k], {0.0, 0.0}, kInterior, h);
        }
      }
    }
  }

  void cartesian_fill() {
    double h = ref.dx_inf;
    Vec2 center;
    double ext_x, ext_y_lo, ext_y_hi;
    if (geom.outer == Geometry::Outer::Disk) {
      center = geom.disk_center;
      ext_x = geom.disk_radius;
      ext_y_lo = ext_y_hi = geom.disk_radius;
    } else {
      center = geom.lo + Vec2{0.5 * geom.length, 0.5 * geom.height};
      ext_x = 0.5 * geom.length;
      ext_y_hi = 0.5 * geom.height;
      ext_y_lo = 0.5 * geom.height + (geom.notch.enabled ? geom.notch.depth : 0.0);
    }
    int kx = (int)std::ceil(ext_x / h);
    int ky_lo = (int)std::ceil(ext_y_lo / h);
    int ky_hi = (int)std::ceil(ext_y_hi / h);
    double full_band = band_thickness(ref.levels);
    begin_wave();
    for (int ix = -kx; ix <= kx; ++ix)
      for (int iy = -ky_lo; iy <= ky_hi; ++iy) {
        Vec2 p = center + Vec2{ix * h, iy * h};
        if (!inside_outer(geom, p)) continue;
        if (outer_boundary_distance(geom, p) < 0.5 * h) continue;
        bool drop = false;
        for (const Colloid& c : geom.colloids)
          if (colloid_signed_distance(c, p) < full_band) {
            drop = true;  // region already covered by the layer bands
            break;
          }
        if (drop || crowded(p, h)) continue;
        add(p, {0.0, 0.0}, kInterior, h);
      }
  }
};

}  // namespace

PointCloud generate_cloud(const Geometry& g, const RefinementSpec& refine) {
  if (refine.dx_inf <= 0.0) throw GeometryError("refinement: dx_inf must be positive");
  if (refine.levels < 1 || refine.layers < 1)
    throw GeometryError("refinement: levels and layers must be at least 1");
  double dx0 = refine.boundary_spacing();
  for (std::size_t c = 0; c < g.colloids.size(); ++c) {
    if (dx0 > g.colloids[c].min_feature())
      throw ResolutionError("boundary spacing " + std::to_string(dx0) +
                            " exceeds the smallest feature of colloid " + std::to_string(c));
    if (colloid_wall_gap(g, g.colloids[c]) <= 0.0)
      throw GeometryError("colloid " + std::to_string(c) + " intersects the outer boundary");
    for (std::size_t c2 = c + 1; c2 < g.colloids.size(); ++c2)
      if (colloid_gap(g.colloids[c], g.colloids[c2]) <= 0.0)
        throw GeometryError("colloids " + std::to_string(c) + " and " + std::to_string(c2) +
                            " overlap");
  }

  Builder b(g, refine);
  b.outer_boundary();
  b.colloid_boundaries();
  b.layer_waves();
  b.cartesian_fill();
  b.pc.dx_inf = refine.dx_inf;
  b.pc.dx0 = dx0;
  return std::move(b.pc);
}

void compute_supports(PointCloud& pc, int order) {
  int n = pc.n();
  int dim = poly_dim(order);
  if (n <= dim)
    throw UnisolvencyError("cloud has " + std::to_string(n) + " points but order " +
                           std::to_string(order) + " needs more than " + std::to_string(dim));
  pc.tree = KdTree(pc.pos);
  double sup = 0.0;
  for (int i = 0; i < n; ++i) {
    double nn = pc.tree.nearest_dist(pc.pos[i], i);
    if (nn <= 0.0) throw GeometryError("duplicate point at index " + std::to_string(i));
    sup = std::max(sup, nn);
  }
  pc.dx_inf_measured = sup;

  pc.eps.assign(n, 0.0);
  std::vector<int> cand;
  std::vector<std::pair<double, int>> order_by_dist;
  for (int i = 0; i < n; ++i) {
    double r = (order + 1) * std::max(pc.spacing.empty() ? sup : pc.spacing[i], 0.0);
    if (r <= 0.0) r = (order + 1) * sup;
    int tries = 0;
    for (;;) {
      pc.tree.radius_query(pc.pos[i], r, cand);
      if ((int)cand.size() > dim) break;  // need dim neighbors besides the point itself
      r *= 2.0;
      if (++tries > 64)
        throw UnisolvencyError("point " + std::to_string(i) +
                               ": cannot gather enough neighbors for order " +
                               std::to_string(order));
    }
    order_by_dist.clear();
    for (int j : cand)
      if (j != i) order_by_dist.push_back({dist(pc.pos[i], pc.pos[j]), j});
    std::sort(order_by_dist.begin(), order_by_dist.end());
    pc.eps[i] = 1.5 * order_by_dist[dim - 1].first;
  }
}

void build_neighbors(PointCloud& pc) {
  int n = pc.n();
  if ((int)pc.eps.size() != n) throw StencilError("build_neighbors: run compute_supports first");
  std::vector<std::vector<int>> one_sided(n);
  std::vector<int> hits;
  for (int i = 0; i < n; ++i) {
    pc.tree.radius_query(pc.pos[i], pc.eps[i], hits);
    for (int j : hits)
      if (j != i) one_sided[i].push_back(j);
  }
  pc.neigh.assign(n, {});
  for (int i = 0; i < n; ++i) pc.neigh[i] = one_sided[i];
  for (int i = 0; i < n; ++i)
    for (int j : one_sided[i]) pc.neigh[j].push_back(i);
  for (int i = 0; i < n; ++i) {
    std::sort(pc.neigh[i].begin(), pc.neigh[i].end());
    pc.neigh[i].erase(std::unique(pc.neigh[i].begin(), pc.neigh[i].end()), pc.neigh[i].end());
  }
}

}  // namespace mstokes
