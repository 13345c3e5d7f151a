#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mstokes/amg.hpp"
#include "mstokes/csr.hpp"

namespace mstokes {

// S = K - G diag(L)^-1 B over the core pressure indices (the trailing
// mean-constraint row and column of L are skipped). A zero pressure diagonal
// that actually couples G to B is an error.
Csr approx_schur(const Csr& K, const Csr& G, const Csr& B, const Csr& L);

// Upper block-triangular preconditioner for [[K, G], [B, L]]:
//   z_p from one AMG V-cycle on the core pressure Laplacian, with the
//   mean-constraint border folded in exactly via a rank-1 bordered solve;
//   z_u from one AMG V-cycle on the approximate Schur complement applied to
//   r_u - G z_p.
class BlockPrecond {
 public:
  // `vel_component` gives per-velocity-dof aggregation components (x/y split);
  // sizes are inferred from the blocks: K is n_u x n_u, L is (n_p+1) x (n_p+1).
  BlockPrecond(const Csr& K, const Csr& G, const Csr& B, const Csr& L,
               const std::vector<int>& vel_component,
               const AmgOptions& opt = AmgOptions());

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

  int n_u() const { return n_u_; }
  int n_p() const { return n_p_; }
  bool coarse_fallback() const {
    return amg_S_.direct_fallback() || amg_L_.direct_fallback();
  }
  // Min over rows of |a_ii| / sum_j |a_ij|, j != i; logged as a health signal.
  double dominance_pressure() const { return dom_p_; }
  double dominance_schur() const { return dom_s_; }

 private:
  int n_u_ = 0, n_p_ = 0;
  Csr G_;
  AmgHierarchy amg_S_, amg_L_;
  Eigen::VectorXd t_c_;    // V-cycle applied to the constraint column
  Eigen::VectorXd b_row_;  // constraint row over core pressure dofs
  double sigma_ = 0.0;
  double dom_p_ = 0.0, dom_s_ = 0.0;
};

}  // namespace mstokes
