#include "mstokes/csr.hpp"

#include <algorithm>

#include "mstokes/errors.hpp"

namespace mstokes {

Csr Csr::from_triplets(int nr, int nc, std::vector<Triplet>& t) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  Csr A(nr, nc);
  A.col.reserve(t.size());
  A.val.reserve(t.size());
  std::size_t k = 0;
  for (int r = 0; r < nr; ++r) {
    while (k < t.size() && t[k].r == r) {
      int c = t[k].c;
      double v = 0.0;
      while (k < t.size() && t[k].r == r && t[k].c == c) v += t[k++].v;
      A.col.push_back(c);
      A.val.push_back(v);
    }
    A.rowptr[r + 1] = (int)A.col.size();
  }
  if (k != t.size()) throw SetupError("from_triplets: entry outside matrix dimensions");
  return A;
}

Eigen::VectorXd Csr::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(nrows);
  multiply_add(x, y);
  return y;
}

void Csr::multiply_add(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  for (int r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] += s;
  }
}

Csr Csr::transpose() const {
  Csr T(ncols, nrows);
  std::vector<int> count(ncols, 0);
  for (int c : col) ++count[c];
  for (int r = 0; r < ncols; ++r) T.rowptr[r + 1] = T.rowptr[r] + count[r];
  T.col.resize(col.size());
  T.val.resize(val.size());
  std::vector<int> cursor(T.rowptr.begin(), T.rowptr.end() - 1);
  for (int r = 0; r < nrows; ++r)
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k) {
      int p = cursor[col[k]]++;
      T.col[p] = r;
      T.val[p] = val[k];
    }
  return T;
}

Eigen::VectorXd Csr::diagonal() const {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(nrows);
  for (int r = 0; r < nrows && r < ncols; ++r)
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
      if (col[k] == r) d[r] = val[k];
  return d;
}

Csr Csr::top_left(int nr, int nc) const {
  Csr A(nr, nc);
  for (int r = 0; r < nr; ++r) {
    for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
      if (col[k] < nc) {
        A.col.push_back(col[k]);
        A.val.push_back(val[k]);
      }
    A.rowptr[r + 1] = (int)A.col.size();
  }
  return A;
}

double Csr::coeff(int r, int c) const {
  for (int k = rowptr[r]; k < rowptr[r + 1]; ++k)
    if (col[k] == c) return val[k];
  return 0.0;
}

Csr spgemm(const Csr& A, const Csr& B) {
  if (A.ncols != B.nrows) throw SetupError("spgemm: dimension mismatch");
  Csr C(A.nrows, B.ncols);
  std::vector<double> acc(B.ncols, 0.0);
  std::vector<int> marker(B.ncols, -1);
  std::vector<int> cols;
  for (int r = 0; r < A.nrows; ++r) {
    cols.clear();
    for (int ka = A.rowptr[r]; ka < A.rowptr[r + 1]; ++ka) {
      int j = A.col[ka];
      double av = A.val[ka];
      for (int kb = B.rowptr[j]; kb < B.rowptr[j + 1]; ++kb) {
        int c = B.col[kb];
        if (marker[c] != r) {
          marker[c] = r;
          acc[c] = 0.0;
          cols.push_back(c);
        }
        acc[c] += av * B.val[kb];
      }
    }
    std::sort(cols.begin(), cols.end());
    for (int c : cols) {
      C.col.push_back(c);
      C.val.push_back(acc[c]);
    }
    C.rowptr[r + 1] = (int)C.col.size();
  }
  return C;
}

Csr sp_add(const Csr& A, double alpha, const Csr& B) {
  if (A.nrows != B.nrows || A.ncols != B.ncols) throw SetupError("sp_add: dimension mismatch");
  Csr C(A.nrows, A.ncols);
  for (int r = 0; r < A.nrows; ++r) {
    int ka = A.rowptr[r], kb = B.rowptr[r];
    while (ka < A.rowptr[r + 1] || kb < B.rowptr[r + 1]) {
      int ca = ka < A.rowptr[r + 1] ? A.col[ka] : A.ncols;
      int cb = kb < B.rowptr[r + 1] ? B.col[kb] : A.ncols;
      if (ca < cb) {
        C.col.push_back(ca);
        C.val.push_back(A.val[ka++]);
      } else if (cb < ca) {
        C.col.push_back(cb);
        C.val.push_back(alpha * B.val[kb++]);
      } else {
        C.col.push_back(ca);
        C.val.push_back(A.val[ka++] + alpha * B.val[kb++]);
      }
    }
    C.rowptr[r + 1] = (int)C.col.size();
  }
  return C;
}

Csr scale_rows(const Csr& A, const Eigen::VectorXd& s) {
  Csr C = A;
  for (int r = 0; r < A.nrows; ++r)
    for (int k = C.rowptr[r]; k < C.rowptr[r + 1]; ++k) C.val[k] *= s[r];
  return C;
}

}  // namespace mstokes
