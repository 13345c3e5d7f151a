#pragma once

#include <Eigen/Dense>
#include <vector>

namespace mstokes {

struct Triplet {
  int r, c;
  double v;
};

// Compressed sparse row matrix with sorted, deduplicated column indices.
struct Csr {
  int nrows = 0, ncols = 0;
  std::vector<int> rowptr;
  std::vector<int> col;
  std::vector<double> val;

  Csr() { rowptr.push_back(0); }
  Csr(int nr, int nc) : nrows(nr), ncols(nc), rowptr(nr + 1, 0) {}

  int nnz() const { return (int)col.size(); }

  static Csr from_triplets(int nr, int nc, std::vector<Triplet>& t);

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  void multiply_add(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;  // y += A x

  Csr transpose() const;
  Eigen::VectorXd diagonal() const;

  // Leading principal submatrix (first nr rows and nc columns).
  Csr top_left(int nr, int nc) const;

  double coeff(int r, int c) const;
};

Csr spgemm(const Csr& A, const Csr& B);
// A + alpha * B with pattern union.
Csr sp_add(const Csr& A, double alpha, const Csr& B);
// Row scaling: diag(s) * A.
Csr scale_rows(const Csr& A, const Eigen::VectorXd& s);

}  // namespace mstokes
