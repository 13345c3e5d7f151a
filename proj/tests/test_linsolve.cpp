#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "mstokes/amg.hpp"
#include "mstokes/csr.hpp"
#include "mstokes/errors.hpp"
#include "mstokes/gmres.hpp"
#include "mstokes/point_cloud.hpp"
#include "mstokes/precond.hpp"
#include "mstokes/stencils.hpp"

using namespace mstokes;

namespace {

Eigen::MatrixXd dense(const Csr& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.nrows, A.ncols);
  for (int i = 0; i < A.nrows; ++i)
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) D(i, A.col[k]) += A.val[k];
  return D;
}

Csr sparse_random(std::mt19937& rng, int nr, int nc, int nnz) {
  std::uniform_int_distribution<int> R(0, nr - 1), C(0, nc - 1);
  std::normal_distribution<double> V(0.0, 1.0);
  std::vector<Triplet> t;
  for (int k = 0; k < nnz; ++k) t.push_back({R(rng), C(rng), V(rng)});
  return Csr::from_triplets(nr, nc, t);
}

Csr identity(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return Csr::from_triplets(n, n, t);
}

// Dirichlet 1D Laplacian, the classic tridiagonal (2, -1) stencil.
Csr lap1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return Csr::from_triplets(n, n, t);
}

// Neumann 1D Laplacian: singular, kernel = constants.
Csr lap1d_neumann(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    double d = (i == 0 || i == n - 1) ? 1.0 : 2.0;
    t.push_back({i, i, d});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return Csr::from_triplets(n, n, t);
}

LinOp op_of(const Csr& A) {
  return [&A](const Eigen::VectorXd& x) { return A * x; };
}

LinOp ident_op() {
  return [](const Eigen::VectorXd& x) { return x; };
}

}  // namespace

TEST_CASE("CSR construction, products, and views match dense arithmetic") {
  std::mt19937 rng(2);
  Csr A = sparse_random(rng, 17, 13, 80);
  Csr B = sparse_random(rng, 13, 9, 60);
  Csr C = sparse_random(rng, 17, 13, 55);
  Eigen::MatrixXd Ad = dense(A), Bd = dense(B), Cd = dense(C);

  // sorted deduplicated columns
  for (int i = 0; i < A.nrows; ++i)
    for (int k = A.rowptr[i] + 1; k < A.rowptr[i + 1]; ++k) CHECK(A.col[k] > A.col[k - 1]);

  Eigen::VectorXd x = Eigen::VectorXd::Random(13);
  CHECK((A * x - Ad * x).lpNorm<Eigen::Infinity>() < 1e-13);

  Eigen::VectorXd y = Eigen::VectorXd::Ones(17);
  A.multiply_add(x, y);
  CHECK((y - (Ad * x + Eigen::VectorXd::Ones(17))).lpNorm<Eigen::Infinity>() < 1e-13);

  CHECK((dense(A.transpose()) - Ad.transpose()).lpNorm<Eigen::Infinity>() < 1e-14);
  CHECK((dense(spgemm(A, B)) - Ad * Bd).lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK((dense(sp_add(A, -2.5, C)) - (Ad - 2.5 * Cd)).lpNorm<Eigen::Infinity>() < 1e-13);

  Eigen::VectorXd s = Eigen::VectorXd::Random(17);
  CHECK((dense(scale_rows(A, s)) - s.asDiagonal() * Ad).lpNorm<Eigen::Infinity>() < 1e-13);

  Csr T = A.top_left(5, 7);
  CHECK((dense(T) - Ad.topLeftCorner(5, 7)).lpNorm<Eigen::Infinity>() < 1e-14);

  Csr D = lap1d(6);
  CHECK((D.diagonal() - Eigen::VectorXd::Constant(6, 2.0)).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(D.coeff(2, 3) == -1.0);
  CHECK(D.coeff(2, 5) == 0.0);
}

TEST_CASE("AMG cycle is exact on the identity") {
  for (int n : {20, 150}) {
    Csr A = identity(n);
    AmgHierarchy amg = AmgHierarchy::setup(A);
    Eigen::VectorXd b = Eigen::VectorXd::Random(n);
    CHECK((amg.cycle(b) - b).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("AMG stationary iteration crushes the 1D Laplacian residual") {
  int n = 1024;
  Csr A = lap1d(n);
  AmgHierarchy amg = AmgHierarchy::setup(A);
  CHECK(amg.num_levels() > 1);
  CHECK(!amg.direct_fallback());

  std::mt19937 rng(4);
  std::normal_distribution<double> N01(0.0, 1.0);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b[i] = N01(rng);

  // measured V(1,1) cycle factor on this operator is ~0.46; 30 cycles leave
  // ample margin below 1e-6
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int it = 0; it < 30; ++it) x += amg.cycle(b - A * x);
  double drop = (b - A * x).norm() / b.norm();
  CHECK(drop < 1e-6);

  // the direct oracle agrees with where the iteration is heading
  Eigen::VectorXd x_ref = dense(A).partialPivLu().solve(b);
  CHECK((x - x_ref).norm() / x_ref.norm() < 1e-3);
}

TEST_CASE("AMG handles the singular Neumann operator") {
  int n = 200;
  Csr A = lap1d_neumann(n);
  AmgHierarchy amg = AmgHierarchy::setup(A);
  Eigen::VectorXd x_true = Eigen::VectorXd::Random(n);
  Eigen::VectorXd b = A * x_true;  // consistent right-hand side
  // near-null modes contract at ~0.7 per cycle on the singular operator, so
  // give the iteration enough cycles to push well past 1e-6
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int it = 0; it < 70; ++it) x += amg.cycle(b - A * x);
  CHECK((b - A * x).norm() / b.norm() < 1e-6);
}

TEST_CASE("AMG cycle is linear in the right-hand side") {
  Csr A = lap1d(300);
  AmgHierarchy amg = AmgHierarchy::setup(A);
  Eigen::VectorXd b1 = Eigen::VectorXd::Random(300), b2 = Eigen::VectorXd::Random(300);
  Eigen::VectorXd lhs = amg.cycle(1.7 * b1 - 0.3 * b2);
  Eigen::VectorXd rhs = 1.7 * amg.cycle(b1) - 0.3 * amg.cycle(b2);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-11 * rhs.lpNorm<Eigen::Infinity>());
}

TEST_CASE("component labels keep interleaved systems convergent") {
  // two independent 1D Laplacians interleaved as even/odd rows
  int half = 256, n = 2 * half;
  std::vector<Triplet> t;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < half; ++i) {
      int r = 2 * i + c;
      t.push_back({r, r, 2.0});
      if (i > 0) t.push_back({r, r - 2, -1.0});
      if (i + 1 < half) t.push_back({r, r + 2, -1.0});
    }
  Csr A = Csr::from_triplets(n, n, t);
  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i % 2;
  AmgHierarchy amg = AmgHierarchy::setup(A, comp);
  Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int it = 0; it < 25; ++it) x += amg.cycle(b - A * x);
  CHECK((b - A * x).norm() / b.norm() < 1e-6);
}

TEST_CASE("GMRES on the identity converges in one iteration") {
  Eigen::VectorXd b = Eigen::VectorXd::Random(40);
  KrylovReport rep;
  GmresOptions opt;
  opt.tol = 1e-12;
  Eigen::VectorXd x = gmres(ident_op(), ident_op(), b, opt, &rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK((x - b).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("GMRES matches a dense direct solve") {
  std::mt19937 rng(8);
  std::normal_distribution<double> N01(0.0, 1.0);
  int n = 50;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = N01(rng) / std::sqrt((double)n);
  A += 4.0 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  Eigen::VectorXd x_ref = A.fullPivLu().solve(b);

  LinOp apply_A = [&A](const Eigen::VectorXd& v) { return Eigen::VectorXd(A * v); };
  GmresOptions opt;
  opt.tol = 1e-12;
  KrylovReport rep;
  Eigen::VectorXd x = gmres(apply_A, ident_op(), b, opt, &rep);
  CHECK(rep.converged);
  CHECK((x - x_ref).norm() / x_ref.norm() < 1e-8);

  // the recorded history is the true residual and never increases
  for (std::size_t k = 1; k < rep.history.size(); ++k)
    CHECK(rep.history[k] <= rep.history[k - 1] * (1.0 + 1e-12));
  Eigen::VectorXd r = b - A * x;
  CHECK(r.norm() / b.norm() == doctest::Approx(rep.rel_residual).epsilon(1e-8));

  // restarting still converges, just less directly
  opt.restart = 10;
  KrylovReport rep2;
  Eigen::VectorXd x2 = gmres(apply_A, ident_op(), b, opt, &rep2);
  CHECK(rep2.converged);
  CHECK((x2 - x_ref).norm() / x_ref.norm() < 1e-8);
  CHECK(rep2.iterations >= rep.iterations);
}

TEST_CASE("GMRES with a zero right-hand side returns zero") {
  KrylovReport rep;
  Eigen::VectorXd x = gmres(ident_op(), ident_op(), Eigen::VectorXd::Zero(12),
                            GmresOptions{}, &rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(x.norm() == 0.0);
}

TEST_CASE("approximate Schur complement arithmetic") {
  // B = 0 leaves K untouched
  std::mt19937 rng(12);
  Csr K = sparse_random(rng, 4, 4, 10);
  Csr G0(4, 4), B0(4, 4), L = identity(4);
  CHECK((dense(approx_schur(K, G0, B0, L)) - dense(K)).lpNorm<Eigen::Infinity>() == 0.0);

  // K = I, G = [I 0], B = [I; 0], L = diag(2, 2, 0): S = 0.5 I
  std::vector<Triplet> tg, tb, tl;
  for (int i = 0; i < 2; ++i) {
    tg.push_back({i, i, 1.0});
    tb.push_back({i, i, 1.0});
    tl.push_back({i, i, 2.0});
  }
  Csr K2 = identity(2);
  Csr G = Csr::from_triplets(2, 3, tg);
  Csr B = Csr::from_triplets(3, 2, tb);
  Csr L2 = Csr::from_triplets(3, 3, tl);
  Eigen::MatrixXd S = dense(approx_schur(K2, G, B, L2));
  CHECK((S - 0.5 * Eigen::MatrixXd::Identity(2, 2)).lpNorm<Eigen::Infinity>() < 1e-15);

  // a zero pressure diagonal touched from both sides is an error
  std::vector<Triplet> tg2 = {{0, 1, 1.0}}, tb2 = {{1, 0, 1.0}}, tl2 = {{0, 0, 2.0}};
  Csr G2 = Csr::from_triplets(2, 3, tg2);
  Csr B2 = Csr::from_triplets(3, 2, tb2);
  Csr L3 = Csr::from_triplets(3, 3, tl2);
  CHECK_THROWS_AS(approx_schur(K2, G2, B2, L3), SetupError);
  // touched from one side only, the term is dropped instead
  CHECK_NOTHROW(approx_schur(K2, G0.top_left(2, 3), B2, L3));
}

TEST_CASE("block preconditioner is exact for the decoupled bordered model") {
  // K = I, G = B = 0, L = [[I, 1], [1', 0]]: one GMRES iteration suffices
  int n_u = 6, n_p = 5;
  Csr K = identity(n_u);
  Csr G(n_u, n_p + 1), B(n_p + 1, n_u);
  std::vector<Triplet> tl;
  for (int i = 0; i < n_p; ++i) {
    tl.push_back({i, i, 1.0});
    tl.push_back({i, n_p, 1.0});
    tl.push_back({n_p, i, 1.0});
  }
  Csr L = Csr::from_triplets(n_p + 1, n_p + 1, tl);
  std::vector<int> comp(n_u);
  for (int i = 0; i < n_u; ++i) comp[i] = i % 2;
  BlockPrecond M(K, G, B, L, comp);
  CHECK(M.n_u() == n_u);
  CHECK(M.n_p() == n_p);

  Eigen::MatrixXd Ad = Eigen::MatrixXd::Zero(n_u + n_p + 1, n_u + n_p + 1);
  Ad.topLeftCorner(n_u, n_u) = dense(K);
  Ad.bottomRightCorner(n_p + 1, n_p + 1) = dense(L);
  LinOp apply_A = [&Ad](const Eigen::VectorXd& v) { return Eigen::VectorXd(Ad * v); };
  LinOp apply_M = [&M](const Eigen::VectorXd& v) { return M.apply(v); };

  Eigen::VectorXd b = Eigen::VectorXd::Random(n_u + n_p + 1);
  GmresOptions opt;
  opt.tol = 1e-12;
  KrylovReport rep;
  Eigen::VectorXd x = gmres(apply_A, apply_M, b, opt, &rep);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  CHECK((Ad * x - b).norm() / b.norm() < 1e-12);

  // zero residual maps to zero and the application is linear
  CHECK(M.apply(Eigen::VectorXd::Zero(n_u + n_p + 1)).norm() == 0.0);
  Eigen::VectorXd r1 = Eigen::VectorXd::Random(n_u + n_p + 1);
  Eigen::VectorXd r2 = Eigen::VectorXd::Random(n_u + n_p + 1);
  Eigen::VectorXd lhs = M.apply(0.6 * r1 - 2.0 * r2);
  Eigen::VectorXd rhs = 0.6 * M.apply(r1) - 2.0 * M.apply(r2);
  CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-13 * rhs.lpNorm<Eigen::Infinity>());
}

TEST_CASE("AMG-preconditioned GMRES solves the bordered pressure Poisson system") {
  Geometry g;
  g.lo = {0.0, 0.0};
  g.length = 1.0;
  g.height = 1.0;
  PointCloud pc = generate_cloud(g, RefinementSpec{1.0 / 32, 1, 1});
  compute_supports(pc, 2);
  build_neighbors(pc);

  // Neumann pressure Laplacian plus the zero-mean border, exactly the
  // nonsingular pressure block the solver assembles.
  int n = pc.n();
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    StaggeredStencils st = staggered_stencil(pc, i, 2, pc.is_boundary(i));
    for (std::size_t k = 0; k < st.lap.cols.size(); ++k)
      t.push_back({i, st.lap.cols[k], st.lap.w(0, k)});
    t.push_back({i, n, 1.0});
    t.push_back({n, i, 1.0});
  }
  Csr A = Csr::from_triplets(n + 1, n + 1, t);
  Csr L_core = A.top_left(n, n);

  // Preconditioner with the same shape BlockPrecond uses for its pressure
  // half: one V-cycle on the core with the rank-1 border folded in exactly.
  AmgHierarchy amg = AmgHierarchy::setup(L_core);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd t_c = amg.cycle(ones);
  double sigma = ones.dot(t_c);
  REQUIRE(std::abs(sigma) > 1e-300);
  LinOp apply_M = [&](const Eigen::VectorXd& r) {
    Eigen::VectorXd tt = amg.cycle(r.head(n));
    double zeta = (ones.dot(tt) - r[n]) / sigma;
    Eigen::VectorXd z(n + 1);
    z.head(n) = tt - zeta * t_c;
    z[n] = zeta;
    return z;
  };

  Eigen::VectorXd x_true = Eigen::VectorXd::Random(n + 1);
  Eigen::VectorXd b = A * x_true;
  GmresOptions opt;
  opt.tol = 1e-10;
  opt.max_iter = 200;
  KrylovReport rep;
  gmres(op_of(A), apply_M, b, opt, &rep);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 30);
  Eigen::VectorXd x = gmres(op_of(A), apply_M, b, opt, nullptr);
  CHECK((x - x_true).norm() / x_true.norm() < 1e-6);
}
