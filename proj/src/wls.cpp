#include "mstokes/wls.hpp"

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

// Minimum-norm least-squares inverse of A with relative singular value cutoff.
Eigen::MatrixXd svd_pinv(const Eigen::MatrixXd& A, double rtol, int& rank, double& cond) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  double cutoff = s.size() > 0 ? rtol * s[0] : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  rank = 0;
  double smin = 0.0;
  for (int k = 0; k < s.size(); ++k)
    if (s[k] > cutoff) {
      inv[k] = 1.0 / s[k];
      smin = s[k];
      ++rank;
    }
  cond = (rank > 0 && smin > 0.0) ? s[0] / smin : std::numeric_limits<double>::infinity();
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

WlsFit WlsFit::compute(const Eigen::MatrixXd& design, const Eigen::VectorXd& weight,
                       const Eigen::MatrixXd& cons, const WlsOptions& opt) {
  int n = (int)design.rows(), K = (int)design.cols();
  if (weight.size() != n) throw StencilError("WlsFit: weight size does not match sample count");
  WlsFit fit;
  fit.sqw_ = weight.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd B = fit.sqw_.asDiagonal() * design;

  if (cons.size() == 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    qr.setThreshold(opt.pinv_rtol);
    if (n >= K && qr.rank() == K) {
      // full rank: pinv(B) = P R^-1 Q1'
      Eigen::MatrixXd Q1 = qr.householderQ() * Eigen::MatrixXd::Identity(n, K);
      Eigen::MatrixXd R = qr.matrixQR().topLeftCorner(K, K);
      fit.sample_core_ = qr.colsPermutation() *
                         R.triangularView<Eigen::Upper>().solve(Q1.transpose());
      double dmax = 0.0, dmin = std::numeric_limits<double>::max();
      for (int k = 0; k < K; ++k) {
        double d = std::abs(R(k, k));
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
      }
      fit.condition_ = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
    } else {
      int rank;
      fit.sample_core_ = svd_pinv(B, opt.pinv_rtol, rank, fit.condition_);
      fit.rank_deficient_ = true;
    }
    fit.constraint_map_ = Eigen::MatrixXd::Zero(K, 0);
    return fit;
  }

  if (cons.cols() != K) throw StencilError("WlsFit: constraint column count does not match basis");
  int nc = (int)cons.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(cons);
  lu.setThreshold(opt.pinv_rtol);
  Eigen::MatrixXd Z = lu.kernel();  // K x kz
  int cr, dummy_rank;
  double ccond, bzcond;
  Eigen::MatrixXd Cp = svd_pinv(cons, opt.pinv_rtol, cr, ccond);  // K x nc
  Eigen::MatrixXd BZ = B * Z;
  Eigen::MatrixXd BZp = svd_pinv(BZ, opt.pinv_rtol, dummy_rank, bzcond);  // kz x n
  fit.rank_deficient_ = dummy_rank < Z.cols() || cr < nc;
  fit.condition_ = bzcond;
  fit.sample_core_ = Z * BZp;  // K x n
  fit.constraint_map_ = (Eigen::MatrixXd::Identity(K, K) - fit.sample_core_ * B) * Cp;
  return fit;
}

Eigen::VectorXd WlsFit::coefficients(const Eigen::VectorXd& values,
                                     const Eigen::VectorXd& cons_rhs) const {
  Eigen::VectorXd c = sample_core_ * sqw_.cwiseProduct(values);
  if (cons_rhs.size() > 0) c += constraint_map_ * cons_rhs;
  return c;
}

Eigen::VectorXd WlsFit::stencil_row(const Eigen::VectorXd& f) const {
  return sqw_.cwiseProduct(sample_core_.transpose() * f);
}

Eigen::VectorXd WlsFit::constraint_row(const Eigen::VectorXd& f) const {
  return constraint_map_.transpose() * f;
}

Eigen::MatrixXd WlsFit::sample_map() const { return sample_core_ * sqw_.asDiagonal(); }

}  // namespace mstokes
