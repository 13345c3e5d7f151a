#include "mstokes/amg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

Eigen::MatrixXd to_dense(const Csr& A) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.nrows, A.ncols);
  for (int r = 0; r < A.nrows; ++r)
    for (int k = A.rowptr[r]; k < A.rowptr[r + 1]; ++k) M(r, A.col[k]) += A.val[k];
  return M;
}

// Inverse diagonal for Jacobi smoothing and prolongator smoothing. Stencils
// with symmetric positive/negative rings can leave a row's diagonal near zero
// while its off-diagonal mass stays O(1); dividing by it would make the sweep
// unbounded. Clip the magnitude from below at a fraction of the off-diagonal
// row sum, which keeps ||w D^-1 A||_inf bounded and leaves diagonally
// dominant rows untouched.
Eigen::VectorXd safeguarded_inv_diag(const Csr& A) {
  Eigen::VectorXd d = A.diagonal();
  Eigen::VectorXd inv(d.size());
  for (int i = 0; i < A.nrows; ++i) {
    double offsum = 0.0;
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k)
      if (A.col[k] != i) offsum += std::abs(A.val[k]);
    double mag = std::max(std::abs(d[i]), 0.5 * offsum);
    if (mag == 0.0) mag = 1.0;  // fully empty row
    inv[i] = (d[i] < 0.0 ? -1.0 : 1.0) / mag;
  }
  return inv;
}

// Strong-connection adjacency on the symmetrized values, filtered by component.
std::vector<std::vector<int>> strength_graph(const Csr& A, const std::vector<int>& comp,
                                             double theta) {
  Csr S = sp_add(A, 1.0, A.transpose());  // 2*(A+A')/2; scale is irrelevant to ratios below
  Eigen::VectorXd d = S.diagonal();
  std::vector<std::vector<int>> strong(A.nrows);
  for (int i = 0; i < S.nrows; ++i) {
    for (int k = S.rowptr[i]; k < S.rowptr[i + 1]; ++k) {
      int j = S.col[k];
      if (j == i || comp[j] != comp[i]) continue;
      double bound = theta * std::sqrt(std::abs(d[i] * d[j]));
      if (std::abs(S.val[k]) > bound) strong[i].push_back(j);
    }
  }
  return strong;
}

// Greedy aggregation: seed aggregates around fully-unclaimed points, attach
// leftovers to their strongest aggregated neighbor, then singletons.
std::vector<int> aggregate(const std::vector<std::vector<int>>& strong, int n,
                           int* num_agg_out) {
  std::vector<int> agg(n, -1);
  int num_agg = 0;
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    bool clean = true;
    for (int j : strong[i])
      if (agg[j] >= 0) { clean = false; break; }
    if (!clean) continue;
    agg[i] = num_agg;
    for (int j : strong[i]) agg[j] = num_agg;
    ++num_agg;
  }
  for (int i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    int best = -1;
    for (int j : strong[i]) {
      if (agg[j] < 0) continue;
      if (best < 0 || agg[j] < agg[best]) best = j;
    }
    if (best >= 0) agg[i] = agg[best];
  }
  for (int i = 0; i < n; ++i)
    if (agg[i] < 0) agg[i] = num_agg++;
  *num_agg_out = num_agg;
  return agg;
}

double estimate_rho(const Csr& A, const Eigen::VectorXd& inv_diag) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(A.nrows);
  v /= v.norm();
  double rho = 0.0;
  for (int it = 0; it < 10; ++it) {
    Eigen::VectorXd w = (A * v).cwiseProduct(inv_diag);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;
    rho = nw;
    v = w / nw;
  }
  return rho;
}

}  // namespace

AmgHierarchy AmgHierarchy::setup(const Csr& A0, const std::vector<int>& component,
                                 const AmgOptions& opt) {
  if (A0.nrows != A0.ncols) throw SetupError("amg requires a square matrix");
  AmgHierarchy h;
  h.opt_ = opt;

  Csr A = A0;
  std::vector<int> comp = component;
  if ((int)comp.size() != A.nrows) comp.assign(A.nrows, 0);

  while (A.nrows > opt.max_coarse && (int)h.levels_.size() < opt.max_levels - 1) {
    auto strong = strength_graph(A, comp, opt.strength);
    int num_agg = 0;
    std::vector<int> agg = aggregate(strong, A.nrows, &num_agg);
    if (num_agg >= (int)(opt.stagnation_ratio * A.nrows) || num_agg == A.nrows) {
      h.direct_fallback_ = true;
      break;
    }

    Level lvl;
    lvl.A = A;
    lvl.inv_diag = safeguarded_inv_diag(A);

    // P = (I - w D^-1 A) P_tent with w = (4/3)/rho(D^-1 A).
    std::vector<Triplet> pt;
    pt.reserve(A.nrows);
    for (int i = 0; i < A.nrows; ++i) pt.push_back({i, agg[i], 1.0});
    Csr P_tent = Csr::from_triplets(A.nrows, num_agg, pt);

    double rho = estimate_rho(A, lvl.inv_diag);
    if (rho > 0.0) {
      double w = (4.0 / 3.0) / rho;
      Csr DA = scale_rows(A, lvl.inv_diag);
      Csr AP = spgemm(DA, P_tent);
      lvl.P = sp_add(P_tent, -w, AP);
    } else {
      lvl.P = P_tent;
    }
    lvl.R = lvl.P.transpose();

    Csr Ac = spgemm(lvl.R, spgemm(A, lvl.P));
    std::vector<int> comp_c(num_agg, 0);
    for (int i = 0; i < A.nrows; ++i) comp_c[agg[i]] = comp[i];

    h.levels_.push_back(std::move(lvl));
    A = std::move(Ac);
    comp = std::move(comp_c);
  }

  h.coarse_n_ = A.nrows;
  h.coarse_dense_ = to_dense(A);
  // Complete orthogonal decomposition tolerates the singular coarse operators
  // that pure-Neumann pressure blocks produce.
  h.coarse_solver_.compute(h.coarse_dense_);
  return h;
}

Eigen::VectorXd AmgHierarchy::cycle(const Eigen::VectorXd& b) const {
  return cycle_level(0, b);
}

Eigen::VectorXd AmgHierarchy::cycle_level(std::size_t lvl, const Eigen::VectorXd& b) const {
  if (lvl == levels_.size()) return coarse_solver_.solve(b);

  const Level& L = levels_[lvl];
  const double w = opt_.jacobi_damping;
  // Pre-smooth from zero: x = w D^-1 b.
  Eigen::VectorXd x = w * b.cwiseProduct(L.inv_diag);
  Eigen::VectorXd r = b - L.A * x;
  Eigen::VectorXd ec = cycle_level(lvl + 1, L.R * r);
  x += L.P * ec;
  r = b - L.A * x;
  x += w * r.cwiseProduct(L.inv_diag);
  return x;
}

}  // namespace mstokes
