#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "mstokes/assembly.hpp"
#include "mstokes/errors.hpp"
#include "mstokes/point_cloud.hpp"

using namespace mstokes;

namespace {

Geometry unit_square() {
  Geometry g;
  g.lo = {0.0, 0.0};
  g.length = 1.0;
  g.height = 1.0;
  return g;
}

PointCloud colloid_cloud(Geometry& g, const Colloid& c, const RefinementSpec& ref, int order) {
  g.colloids.push_back(c);
  PointCloud pc = generate_cloud(g, ref);
  compute_supports(pc, order);
  build_neighbors(pc);
  return pc;
}

}  // namespace

TEST_CASE("dof layout arithmetic") {
  PointCloud pc;
  pc.pos.assign(7, Vec2{0.0, 0.0});
  pc.region.assign(7, kInterior);
  std::vector<Colloid> cols(3);
  cols[1].free = true;
  cols[2].free = true;
  DofMap d = build_dofmap(pc, cols);
  CHECK(d.n == 7);
  CHECK(d.n_free == 2);
  CHECK(d.free_slot == std::vector<int>({-1, 0, 1}));
  CHECK(d.n_u() == 2 * 7 + 6);
  CHECK(d.n_p() == 8);
  CHECK(d.ux(3) == 6);
  CHECK(d.uy(3) == 7);
  CHECK(d.mode(1, 0) == 14);
  CHECK(d.mode(2, 2) == 19);
  CHECK(d.p(0) == 20);
  CHECK(d.lam() == 27);
  CHECK(d.total() == 28);
}

TEST_CASE("arclength weights on a disk are uniform and sum to the perimeter") {
  Geometry g = unit_square();
  Colloid c;
  c.size = 0.2;
  c.pos = {0.5, 0.5};
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.2, 2, 2}, 2);

  std::vector<double> w = arclength_weights(pc, 0);
  std::size_t n = pc.colloid_pts[0].size();
  double per = 2.0 * M_PI * 0.2;
  for (double wk : w) CHECK(wk == doctest::Approx(per / n).epsilon(1e-13));
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(per).epsilon(1e-13));
}

TEST_CASE("arclength weights on a square sum to the perimeter") {
  Geometry g = unit_square();
  Colloid c;
  c.shape = ColloidShape::Square;
  c.size = 0.3;
  c.pos = {0.5, 0.5};
  c.theta = 0.4;
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.2, 2, 2}, 2);
  std::vector<double> w = arclength_weights(pc, 0);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.2).epsilon(1e-13));
}

TEST_CASE("degenerate boundary loops are rejected") {
  PointCloud pc;
  pc.colloid_pts.push_back({0, 1});
  pc.colloid_arcpos.push_back({0.0, 0.5});
  pc.colloid_perimeter.push_back(1.0);
  CHECK_THROWS_AS(arclength_weights(pc, 0), GeometryError);
}

TEST_CASE("zero data assembles a zero right-hand side") {
  Geometry g = unit_square();
  PointCloud pc = generate_cloud(g, RefinementSpec{0.125, 1, 1});
  compute_supports(pc, 2);
  build_neighbors(pc);
  BlockSystem S = assemble(pc, {}, 2, 1.0, FlowData{});
  CHECK(S.f.norm() == 0.0);
  CHECK(S.g.norm() == 0.0);
  CHECK(S.rhs().norm() == 0.0);
  CHECK(S.apply(Eigen::VectorXd::Zero(S.dofs.total())).norm() == 0.0);
}

TEST_CASE("block shapes, Neumann coupling pattern, and row sparsity bounds") {
  Geometry g = unit_square();
  Colloid c;
  c.size = 0.15;
  c.pos = {0.45, 0.5};
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.125, 2, 1}, 2);
  BlockSystem S = assemble(pc, g.colloids, 2, 0.7, FlowData{});
  const DofMap& d = S.dofs;
  int N = pc.n();

  CHECK(S.K.nrows == d.n_u());
  CHECK(S.K.ncols == d.n_u());
  CHECK(S.G.nrows == d.n_u());
  CHECK(S.G.ncols == d.n_p());
  CHECK(S.B.nrows == d.n_p());
  CHECK(S.B.ncols == d.n_u());
  CHECK(S.L.nrows == d.n_p());

  for (int i = 0; i < N; ++i) {
    int nb = (int)pc.neigh[i].size();
    int k_nnz_x = S.K.rowptr[d.ux(i) + 1] - S.K.rowptr[d.ux(i)];
    int k_nnz_y = S.K.rowptr[d.uy(i) + 1] - S.K.rowptr[d.uy(i)];
    int b_nnz = S.B.rowptr[i + 1] - S.B.rowptr[i];
    int l_nnz = S.L.rowptr[i + 1] - S.L.rowptr[i];
    int g_nnz = S.G.rowptr[d.ux(i) + 1] - S.G.rowptr[d.ux(i)];
    if (pc.is_boundary(i)) {
      CHECK(b_nnz > 0);           // Neumann constraint couples velocity
      CHECK(k_nnz_x <= 3);        // Dirichlet row: diagonal plus rigid-mode columns
      CHECK(g_nnz == 0);
    } else {
      CHECK(b_nnz == 0);          // interior pressure rows never touch velocity
      CHECK(k_nnz_x <= 2 * (nb + 1));
      CHECK(k_nnz_y <= 2 * (nb + 1));
      CHECK(g_nnz <= nb + 1);
    }
    CHECK(l_nnz <= nb + 2);       // stencil plus the mean-constraint column
    CHECK(S.L.coeff(i, d.n_p() - 1) == 1.0);
  }
  // constraint row: ones over the pressure points, empty diagonal
  int lam = d.n_p() - 1;
  CHECK(S.B.rowptr[lam + 1] == S.B.rowptr[lam]);
  for (int j = 0; j < N; ++j) CHECK(S.L.coeff(lam, j) == 1.0);
  CHECK(S.L.coeff(lam, lam) == 0.0);

  // velocity aggregation components: x, y, then rigid modes
  for (int i = 0; i < N; ++i) {
    CHECK(S.vel_component[d.ux(i)] == 0);
    CHECK(S.vel_component[d.uy(i)] == 1);
  }
}

TEST_CASE("prescribed rigid rotation fills the Dirichlet rows exactly") {
  Geometry g = unit_square();
  Colloid c;
  c.size = 0.15;
  c.pos = {0.5, 0.5};
  c.vel = {0.3, -0.2};
  c.omega = 1.7;
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.125, 2, 1}, 2);
  BlockSystem S = assemble(pc, g.colloids, 2, 2.0, FlowData{});

  for (int i : pc.colloid_pts[0]) {
    double s = 2.0 / (pc.eps[i] * pc.eps[i]);
    Vec2 rel = pc.pos[i] - c.pos;
    CHECK(S.K.coeff(S.dofs.ux(i), S.dofs.ux(i)) == s);
    CHECK(S.f[S.dofs.ux(i)] == doctest::Approx(s * (0.3 - 1.7 * rel.y)).epsilon(1e-14));
    CHECK(S.f[S.dofs.uy(i)] == doctest::Approx(s * (-0.2 + 1.7 * rel.x)).epsilon(1e-14));
  }
}

TEST_CASE("assembled operator reproduces the analytic residual of an exact interpolant") {
  // u from stream x^2 y + 0.3 y^3 (divergence free, degree 2), p quadratic
  auto u_ex = [](const Vec2& q) { return Vec2{q.x * q.x + 0.9 * q.y * q.y, -2.0 * q.x * q.y}; };
  auto p_ex = [](const Vec2& q) { return q.x * q.x + q.y * q.y + 0.5 * q.x * q.y; };
  double nu = 0.7;
  // f = nu curl(curl u) + grad p, curl(curl u) = -lap u = (-3.8, 0)
  auto f_ex = [nu](const Vec2& q) {
    return Vec2{nu * -3.8 + 2.0 * q.x + 0.5 * q.y, 2.0 * q.y + 0.5 * q.x};
  };

  Geometry g = unit_square();
  PointCloud pc = generate_cloud(g, RefinementSpec{0.1, 1, 1});
  compute_supports(pc, 2);
  build_neighbors(pc);

  FlowData flow;
  flow.body_force = f_ex;
  flow.body_force_div = [](const Vec2&) { return 4.0; };  // lap p
  flow.wall_velocity = u_ex;
  BlockSystem S = assemble(pc, {}, 2, nu, flow);

  int N = pc.n();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(S.dofs.total());
  double pmean = 0.0;
  for (int i = 0; i < N; ++i) pmean += p_ex(pc.pos[i]);
  pmean /= N;
  for (int i = 0; i < N; ++i) {
    Vec2 u = u_ex(pc.pos[i]);
    x[S.dofs.ux(i)] = u.x;
    x[S.dofs.uy(i)] = u.y;
    x[S.dofs.p(i)] = p_ex(pc.pos[i]) - pmean;
  }
  Eigen::VectorXd resid = S.apply(x) - S.rhs();
  double scale = std::max(1.0, S.rhs().lpNorm<Eigen::Infinity>());
  CHECK(resid.lpNorm<Eigen::Infinity>() < 1e-8 * scale);
}

TEST_CASE("traction of a constant pressure field over a closed loop vanishes") {
  Geometry g = unit_square();
  Colloid c;
  c.size = 0.18;
  c.pos = {0.5, 0.5};
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.15, 2, 2}, 2);

  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * pc.n());
  Eigen::VectorXd p = Eigen::VectorXd::Constant(pc.n(), 2.75);
  ForceTorque ft = surface_traction(pc, g.colloids, 2, 1.0, u, p, 0);
  CHECK(std::abs(ft.force.x) < 1e-10);
  CHECK(std::abs(ft.force.y) < 1e-10);
  CHECK(std::abs(ft.torque) < 1e-10);
}

TEST_CASE("force-balance rows integrate the same traction as the diagnostic") {
  Geometry g = unit_square();
  Colloid c;
  c.size = 0.15;
  c.pos = {0.5, 0.45};
  c.free = true;
  PointCloud pc = colloid_cloud(g, c, RefinementSpec{0.125, 2, 1}, 2);
  FlowData flow;
  flow.ext_force = {{0.4, -0.9}};
  flow.ext_torque = {0.25};
  BlockSystem S = assemble(pc, g.colloids, 2, 1.3, flow);
  const DofMap& d = S.dofs;
  int N = pc.n();

  // smooth but otherwise arbitrary field and pressure samples
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d.total());
  Eigen::VectorXd uvec(2 * N), pvec(N);
  for (int i = 0; i < N; ++i) {
    const Vec2& q = pc.pos[i];
    uvec[2 * i] = std::sin(q.x) * q.y;
    uvec[2 * i + 1] = q.x - 0.3 * q.y * q.y;
    pvec[i] = std::cos(q.x + 2.0 * q.y);
    x[d.ux(i)] = uvec[2 * i];
    x[d.uy(i)] = uvec[2 * i + 1];
    x[d.p(i)] = pvec[i];
  }
  Eigen::VectorXd y = S.apply(x);
  ForceTorque ft = surface_traction(pc, g.colloids, 2, 1.3, uvec, pvec, 0);
  CHECK(y[d.mode(0, 0)] == doctest::Approx(ft.force.x).epsilon(1e-11));
  CHECK(y[d.mode(0, 1)] == doctest::Approx(ft.force.y).epsilon(1e-11));
  CHECK(y[d.mode(0, 2)] == doctest::Approx(ft.torque).epsilon(1e-11));

  // external load lands on the balance rows with the hydrostatic sign
  CHECK(S.f[d.mode(0, 0)] == -0.4);
  CHECK(S.f[d.mode(0, 1)] == 0.9);
  CHECK(S.f[d.mode(0, 2)] == -0.25);

  // free-colloid Dirichlet rows are homogeneous and couple the rigid modes
  for (int i : pc.colloid_pts[0]) {
    double s = 1.3 / (pc.eps[i] * pc.eps[i]);
    Vec2 rel = pc.pos[i] - c.pos;
    CHECK(S.f[d.ux(i)] == 0.0);
    CHECK(S.K.coeff(d.ux(i), d.mode(0, 0)) == doctest::Approx(-s).epsilon(1e-14));
    CHECK(S.K.coeff(d.ux(i), d.mode(0, 2)) == doctest::Approx(s * rel.y).epsilon(1e-13));
    CHECK(S.K.coeff(d.uy(i), d.mode(0, 1)) == doctest::Approx(-s).epsilon(1e-14));
    CHECK(S.K.coeff(d.uy(i), d.mode(0, 2)) == doctest::Approx(-s * rel.x).epsilon(1e-13));
    CHECK(S.vel_component[d.ux(i)] == 0);
  }
  for (int k = 0; k < 3; ++k) CHECK(S.vel_component[d.mode(0, k)] == 2);
}
