#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mstokes/csr.hpp"

namespace mstokes {

struct AmgOptions {
  double strength = 0.08;          // strength-of-connection threshold
  double jacobi_damping = 2.0 / 3.0;
  int max_coarse = 64;             // direct factorization at or below this size
  int max_levels = 25;
  double stagnation_ratio = 0.95;  // coarsening slower than this falls back to direct
};

// Smoothed-aggregation hierarchy. Aggregation runs on the symmetrized pattern
// (A + A')/2 while smoothing and the Galerkin products use A itself;
// restriction is the transpose of prolongation. One damped-Jacobi sweep before
// and after each coarse-grid correction.
class AmgHierarchy {
 public:
  // `component`: optional per-row block id; aggregation never merges rows of
  // different components (used to keep velocity components separate).
  static AmgHierarchy setup(const Csr& A, const std::vector<int>& component = {},
                            const AmgOptions& opt = AmgOptions());

  int n() const { return levels_.empty() ? coarse_n_ : levels_[0].A.nrows; }
  int num_levels() const { return (int)levels_.size() + 1; }
  // True when coarsening stagnated and the hierarchy degenerated to a direct solve.
  bool direct_fallback() const { return direct_fallback_; }

  // One V-cycle for A x = b from a zero initial guess; linear in b.
  Eigen::VectorXd cycle(const Eigen::VectorXd& b) const;

 private:
  struct Level {
    Csr A, P, R;
    Eigen::VectorXd inv_diag;  // safeguarded 1/diag for the Jacobi smoother
  };
  std::vector<Level> levels_;
  Eigen::MatrixXd coarse_dense_;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> coarse_solver_;
  int coarse_n_ = 0;
  bool direct_fallback_ = false;
  AmgOptions opt_;

  Eigen::VectorXd cycle_level(std::size_t lvl, const Eigen::VectorXd& b) const;
};

}  // namespace mstokes
