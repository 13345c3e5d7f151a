#include "mstokes/gmres.hpp"

#include <cmath>

namespace mstokes {

Eigen::VectorXd gmres(const LinOp& apply_A, const LinOp& apply_M,
                      const Eigen::VectorXd& b, const GmresOptions& opt,
                      KrylovReport* report) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  KrylovReport rep;

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.converged = true;
    if (report) *report = rep;
    return x;
  }

  const int m = std::max(1, opt.restart);
  Eigen::MatrixXd V(n, m + 1), Z(n, m);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);

  int total = 0;
  bool converged = false;
  Eigen::VectorXd r = b;
  double beta = bnorm;

  while (total < opt.max_iter && !converged) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    int j = 0;
    for (; j < m && total < opt.max_iter; ++j, ++total) {
      Z.col(j) = apply_M(V.col(j));
      Eigen::VectorXd w = apply_A(Z.col(j));
      double wnorm0 = w.norm();
      // Modified Gram-Schmidt.
      for (int i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      // Happy breakdown is judged against the column's own scale, not ||b||:
      // the Arnoldi columns are unit vectors regardless of the data size.
      bool breakdown = H(j + 1, j) <= 1e-14 * wnorm0;
      if (!breakdown) V.col(j + 1) = w / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      double denom = std::hypot(H(j, j), H(j + 1, j));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = H(j, j) / denom;
        sn[j] = H(j + 1, j) / denom;
      }
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      double res = std::abs(g[j + 1]);
      rep.history.push_back(res / bnorm);
      // The Givens value only estimates the residual; lost orthogonality can
      // make it optimistic. Exit the Arnoldi loop on the estimate but let the
      // recomputed true residual below decide convergence (else restart).
      if (res / bnorm <= opt.tol || breakdown) {
        ++j;
        ++total;
        break;
      }
    }
    if (j > 0) {
      Eigen::VectorXd y = H.topLeftCorner(j, j)
                              .triangularView<Eigen::Upper>()
                              .solve(g.head(j));
      x += Z.leftCols(j) * y;
    }
    r = b - apply_A(x);
    beta = r.norm();
    converged = beta / bnorm <= opt.tol;
  }

  rep.iterations = total;
  rep.rel_residual = beta / bnorm;
  rep.converged = rep.rel_residual <= opt.tol;
  if (report) *report = rep;
  return x;
}

}  // namespace mstokes
