#pragma once

#include <Eigen/Dense>

namespace mstokes {

struct WlsOptions {
  // singular values below this fraction of the largest are truncated in the
  // pseudo-inverse fallback
  double pinv_rtol = 1e-12;
};

// Weighted least-squares fit  min_c sum_k w_k (values_k - (design c)_k)^2
// subject to optional equality constraints  cons c = cons_rhs.
//
// The fit is solved by QR on the sqrt(w)-scaled design matrix; rank-deficient
// systems fall back to a truncated-SVD pseudo-inverse (minimum-norm solution).
// Constraints are eliminated exactly through the nullspace of the constraint
// matrix, so they hold to machine precision regardless of the data.
//
// The factorization exposes the linear dependence of any functional f'c of the
// coefficients on the sample values and on the constraint right-hand side;
// stencil generation is built on exactly that.
class WlsFit {
 public:
  static WlsFit compute(const Eigen::MatrixXd& design, const Eigen::VectorXd& weight,
                        const Eigen::MatrixXd& cons = Eigen::MatrixXd(),
                        const WlsOptions& opt = WlsOptions());

  int n_samples() const { return (int)sqw_.size(); }
  int n_basis() const { return (int)sample_core_.rows(); }
  int n_cons() const { return (int)constraint_map_.cols(); }
  bool rank_deficient() const { return rank_deficient_; }

  Eigen::VectorXd coefficients(const Eigen::VectorXd& values,
                               const Eigen::VectorXd& cons_rhs = Eigen::VectorXd()) const;

  // Dependence of f'c on the raw sample values (length n_samples).
  Eigen::VectorXd stencil_row(const Eigen::VectorXd& f) const;
  // Dependence of f'c on the constraint right-hand side (length n_cons).
  Eigen::VectorXd constraint_row(const Eigen::VectorXd& f) const;

  // c = sample_map * values + constraint_map * cons_rhs
  Eigen::MatrixXd sample_map() const;
  const Eigen::MatrixXd& constraint_map() const { return constraint_map_; }

  // 2-norm condition estimate of the scaled (constraint-reduced) design matrix.
  double condition() const { return condition_; }

 private:
  Eigen::VectorXd sqw_;
  Eigen::MatrixXd sample_core_;     // K x n, maps sqrt(w)-scaled values to coefficients
  Eigen::MatrixXd constraint_map_;  // K x nc
  bool rank_deficient_ = false;
  double condition_ = 0.0;
};

}  // namespace mstokes
