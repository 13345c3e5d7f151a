#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace mstokes {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresOptions {
  double tol = 1e-10;   // on the relative residual |b - Ax| / |b|
  int restart = 200;
  int max_iter = 500;
};

struct KrylovReport {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  std::vector<double> history;   // relative residual after each iteration
  double setup_seconds = 0.0;    // filled by the caller that built the preconditioner
  double solve_seconds = 0.0;
  bool coarse_fallback = false;  // an AMG hierarchy degenerated to a direct solve
  double dominance_pressure = 0.0;  // min diagonal-dominance ratio, pressure block
  double dominance_schur = 0.0;     // min diagonal-dominance ratio, velocity Schur block
};

// Right-preconditioned restarted GMRES: solves A x = b where `apply_A` applies
// the operator and `apply_M` the preconditioner inverse. With right
// preconditioning the Arnoldi residual is the true residual, so `history`
// tracks it directly. Returns the best iterate even on non-convergence.
Eigen::VectorXd gmres(const LinOp& apply_A, const LinOp& apply_M,
                      const Eigen::VectorXd& b, const GmresOptions& opt,
                      KrylovReport* report);

}  // namespace mstokes
