#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "mstokes/vec2.hpp"

namespace mstokes {

// Static 2D kd-tree for radius and nearest-neighbor queries on a point set.
// Handles the strongly graded spacings of refined clouds where a single-cell
// binning would degenerate.
class KdTree {
 public:
  KdTree() = default;

  explicit KdTree(const std::vector<Vec2>& pts) : pts_(pts) {
    idx_.resize(pts_.size());
    for (std::size_t i = 0; i < idx_.size(); ++i) idx_[i] = (int)i;
    if (!idx_.empty()) root_ = build(0, (int)idx_.size(), 0);
  }

  std::size_t size() const { return pts_.size(); }

  // Indices of all points strictly within distance r of p.
  void radius_query(const Vec2& p, double r, std::vector<int>& out) const {
    out.clear();
    if (root_ >= 0) radius_rec(root_, p, r * r, out);
  }

  // Distance to the nearest point, excluding index `exclude` (-1 for none).
  double nearest_dist(const Vec2& p, int exclude = -1) const {
    double best = std::numeric_limits<double>::max();
    if (root_ >= 0) nearest_rec(root_, p, exclude, best);
    return std::sqrt(best);
  }

 private:
  static constexpr int kLeafSize = 12;

  struct Node {
    double split = 0.0;
    int axis = 0;
    int lo = 0, hi = 0;     // leaf payload range in idx_
    int left = -1, right = -1;
  };

  std::vector<Vec2> pts_;
  std::vector<int> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;

  static double coord(const Vec2& v, int axis) { return axis == 0 ? v.x : v.y; }

  int build(int lo, int hi, int depth) {
    Node node;
    node.lo = lo;
    node.hi = hi;
    int id = (int)nodes_.size();
    nodes_.push_back(node);
    if (hi - lo <= kLeafSize) return id;
    int axis = depth % 2;
    int mid = (lo + hi) / 2;
    std::nth_element(idx_.begin() + lo, idx_.begin() + mid, idx_.begin() + hi,
                     [&](int a, int b) { return coord(pts_[a], axis) < coord(pts_[b], axis); });
    double split = coord(pts_[idx_[mid]], axis);
    int left = build(lo, mid, depth + 1);
    int right = build(mid, hi, depth + 1);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void radius_rec(int id, const Vec2& p, double r2, std::vector<int>& out) const {
    const Node& n = nodes_[id];
    if (n.left < 0) {
      for (int k = n.lo; k < n.hi; ++k)
        if (dist2(p, pts_[idx_[k]]) < r2) out.push_back(idx_[k]);
      return;
    }
    double d = coord(p, n.axis) - n.split;
    if (d * d < r2 || d <= 0.0) radius_rec(n.left, p, r2, out);
    if (d * d < r2 || d >= 0.0) radius_rec(n.right, p, r2, out);
  }

  void nearest_rec(int id, const Vec2& p, int exclude, double& best) const {
    const Node& n = nodes_[id];
    if (n.left < 0) {
      for (int k = n.lo; k < n.hi; ++k) {
        if (idx_[k] == exclude) continue;
        best = std::min(best, dist2(p, pts_[idx_[k]]));
      }
      return;
    }
    double d = coord(p, n.axis) - n.split;
    int first = d <= 0.0 ? n.left : n.right;
    int second = d <= 0.0 ? n.right : n.left;
    nearest_rec(first, p, exclude, best);
    if (d * d < best) nearest_rec(second, p, exclude, best);
  }
};

}  // namespace mstokes
