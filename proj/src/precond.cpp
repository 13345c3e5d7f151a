#include "mstokes/precond.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

double diag_dominance(const Csr& A) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.nrows; ++i) {
    double diag = 0.0, off = 0.0;
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) {
      if (A.col[k] == i)
        diag += std::abs(A.val[k]);
      else
        off += std::abs(A.val[k]);
    }
    double ratio = (off > 0.0) ? diag / off
                               : std::numeric_limits<double>::infinity();
    worst = std::min(worst, ratio);
  }
  return worst;
}

}  // namespace

Csr approx_schur(const Csr& K, const Csr& G, const Csr& B, const Csr& L) {
  const int np1 = L.nrows;        // includes the mean-constraint dof
  const int np = np1 - 1;
  if (G.ncols != np1 || B.nrows != np1)
    throw SetupError("schur block shapes disagree");

  std::vector<bool> g_col(np1, false);
  for (std::size_t k = 0; k < G.col.size(); ++k)
    if (G.val[k] != 0.0) g_col[G.col[k]] = true;

  Eigen::VectorXd d = L.diagonal();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(np1);
  for (int j = 0; j < np; ++j) {
    bool b_row = B.rowptr[j + 1] > B.rowptr[j];
    if (d[j] == 0.0) {
      if (g_col[j] && b_row)
        throw SetupError("zero pressure diagonal at coupled row " + std::to_string(j));
      continue;
    }
    inv[j] = 1.0 / d[j];
  }
  // inv[np] stays zero: the constraint row never enters the Schur product.

  Csr DB = scale_rows(B, inv);
  Csr GDB = spgemm(G, DB);
  return sp_add(K, -1.0, GDB);
}

BlockPrecond::BlockPrecond(const Csr& K, const Csr& G, const Csr& B, const Csr& L,
                           const std::vector<int>& vel_component,
                           const AmgOptions& opt) {
  n_u_ = K.nrows;
  n_p_ = L.nrows - 1;
  G_ = G;

  Csr S = approx_schur(K, G, B, L);
  Csr L_core = L.top_left(n_p_, n_p_);
  dom_s_ = diag_dominance(S);
  dom_p_ = diag_dominance(L_core);

  amg_S_ = AmgHierarchy::setup(S, vel_component, opt);
  amg_L_ = AmgHierarchy::setup(L_core, {}, opt);

  // Border of L: constraint column c over core rows and constraint row b over
  // core columns. Fold the rank-1 border into the V-cycle exactly.
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n_p_);
  b_row_ = Eigen::VectorXd::Zero(n_p_);
  for (int i = 0; i < n_p_; ++i)
    for (int k = L.rowptr[i]; k < L.rowptr[i + 1]; ++k)
      if (L.col[k] == n_p_) c[i] += L.val[k];
  for (int k = L.rowptr[n_p_]; k < L.rowptr[n_p_ + 1]; ++k)
    if (L.col[k] < n_p_) b_row_[L.col[k]] += L.val[k];

  t_c_ = amg_L_.cycle(c);
  sigma_ = b_row_.dot(t_c_);
  if (std::abs(sigma_) < 1e-300)
    throw SetupError("mean-constraint border is degenerate under the pressure cycle");
}

Eigen::VectorXd BlockPrecond::apply(const Eigen::VectorXd& r) const {
  const Eigen::VectorXd r_u = r.head(n_u_);
  const Eigen::VectorXd r_p = r.segment(n_u_, n_p_);
  const double r_lam = r[n_u_ + n_p_];

  Eigen::VectorXd t = amg_L_.cycle(r_p);
  double zeta = (b_row_.dot(t) - r_lam) / sigma_;
  Eigen::VectorXd z_p(n_p_ + 1);
  z_p.head(n_p_) = t - zeta * t_c_;
  z_p[n_p_] = zeta;

  Eigen::VectorXd z_u = amg_S_.cycle(r_u - G_ * z_p);

  Eigen::VectorXd z(n_u_ + n_p_ + 1);
  z.head(n_u_) = z_u;
  z.tail(n_p_ + 1) = z_p;
  return z;
}

}  // namespace mstokes
