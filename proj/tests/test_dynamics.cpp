#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mstokes/dynamics.hpp"
#include "mstokes/errors.hpp"

using namespace mstokes;

namespace {

Eigen::VectorXd scalar1(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

// n uniform steps of X' = X from X(0) = 1; the exact flow is e^t.
double integrate_exp(SchemeKind scheme, double T, int n) {
  Integrator integ(scheme);
  Eigen::VectorXd X = scalar1(1.0);
  double dt = T / n;
  for (int s = 0; s < n; ++s)
    X = integ.step(X, dt, [](const Eigen::VectorXd& v) { return v; });
  return X[0];
}

}  // namespace

TEST_CASE("constant rates are integrated exactly") {
  Eigen::VectorXd c(2);
  c << 0.25, -0.5;
  std::vector<Eigen::VectorXd> seen;  // arguments the rate was evaluated at
  RateFn F = [&](const Eigen::VectorXd& X) {
    seen.push_back(X);
    return c;
  };
  const double dt = 0.125;
  Eigen::VectorXd X0 = Eigen::VectorXd::Zero(2);

  Integrator integ(SchemeKind::MoultonPC);
  Eigen::VectorXd rate;
  Eigen::VectorXd X1 = integ.step(X0, dt, F, &rate);
  CHECK(rate == c);
  CHECK(X1 == X0 + dt * c);  // bootstrap trapezoid

  Eigen::VectorXd X2 = integ.step(X1, dt, F);
  REQUIRE(seen.size() == 4);
  // with a constant rate the difference predictor returns the current state
  CHECK(seen[2] == X1);
  CHECK(seen[3] == X1);
  for (int k = 0; k < 2; ++k)
    CHECK(std::abs(X2[k] - (X1[k] + dt * c[k])) < 1e-14);
}

TEST_CASE("exponential flow: one-step and global error ratios") {
  const double e01 = std::exp(0.1);

  SUBCASE("single step is third-order accurate locally") {
    double err1 = std::abs(integrate_exp(SchemeKind::Ab2Trapezoid, 0.1, 1) - e01);
    double err2 = std::abs(integrate_exp(SchemeKind::Ab2Trapezoid, 0.05, 1) -
                           std::exp(0.05));
    CHECK(err1 / e01 < 2e-4);
    CHECK(err1 / err2 > 7.0);
    CHECK(err1 / err2 < 9.0);
  }

  SUBCASE("global error halving ratio is near 4") {
    // the first step runs a one-step bootstrap whose local error partially
    // cancels the multistep one; its O(dt) share of the ratio dies out with
    // more steps, so measure in the asymptotic range
    double e = std::exp(1.0);
    double g1 = std::abs(integrate_exp(SchemeKind::Ab2Trapezoid, 1.0, 128) - e);
    double g2 = std::abs(integrate_exp(SchemeKind::Ab2Trapezoid, 1.0, 256) - e);
    CHECK(g1 / g2 > 3.5);
    CHECK(g1 / g2 < 4.5);
  }

  SUBCASE("the difference-predictor variant degrades to first order") {
    double e = std::exp(1.0);
    double g1 = std::abs(integrate_exp(SchemeKind::MoultonPC, 1.0, 10) - e);
    double g2 = std::abs(integrate_exp(SchemeKind::MoultonPC, 1.0, 20) - e);
    CHECK(g1 / g2 > 1.5);
    CHECK(g1 / g2 < 3.0);
  }
}

TEST_CASE("zero rate leaves the state fixed and reset clears history") {
  Integrator integ(SchemeKind::Ab2Trapezoid);
  Eigen::VectorXd X = scalar1(3.5);
  RateFn zero = [](const Eigen::VectorXd& v) {
    return Eigen::VectorXd::Zero(v.size()).eval();
  };
  for (int s = 0; s < 3; ++s) X = integ.step(X, 0.1, zero);
  CHECK(X[0] == 3.5);

  // after reset the next step takes the bootstrap branch again
  Integrator a(SchemeKind::Ab2Trapezoid), b(SchemeKind::Ab2Trapezoid);
  RateFn lin = [](const Eigen::VectorXd& v) { return v; };
  Eigen::VectorXd Xa = scalar1(1.0);
  Xa = a.step(Xa, 0.1, lin);
  Xa = a.step(Xa, 0.1, lin);
  a.reset();
  Eigen::VectorXd ya = a.step(Xa, 0.1, lin);
  Eigen::VectorXd yb = b.step(Xa, 0.1, lin);
  CHECK(ya[0] == yb[0]);
}

TEST_CASE("evolving without free colloids is refused") {
  StokesProblem prob;
  prob.geom.outer = Geometry::Outer::Rect;
  prob.geom.lo = {0.0, 0.0};
  prob.geom.length = 1.0;
  prob.geom.height = 1.0;
  Colloid c;
  c.shape = ColloidShape::Disk;
  c.size = 0.2;
  c.pos = {0.5, 0.5};
  prob.geom.colloids.push_back(c);  // prescribed, not free
  prob.refine = {0.1, 1, 1};
  DynamicsConfig cfg;
  CHECK_THROWS_AS(evolve_colloids(prob, cfg), SetupError);
}

TEST_CASE("quiescent symmetric box: rates vanish and steps=0 records once") {
  StokesProblem prob;
  prob.geom.outer = Geometry::Outer::Rect;
  prob.geom.lo = {-0.5, -0.5};
  prob.geom.length = 1.0;
  prob.geom.height = 1.0;
  Colloid c;
  c.shape = ColloidShape::Disk;
  c.size = 0.15;
  c.pos = {0.0, 0.0};
  c.free = true;
  prob.geom.colloids.push_back(c);
  prob.refine = {0.2, 2, 2};
  prob.order = 2;
  prob.nu = 1.0;
  prob.flow.body_force = [](const Vec2&) { return Vec2{0.0, 0.0}; };
  prob.flow.body_force_div = [](const Vec2&) { return 0.0; };
  prob.flow.wall_velocity = [](const Vec2&) { return Vec2{0.0, 0.0}; };

  DynamicsConfig cfg;
  cfg.steps = 0;
  TrajectoryRecord rec = evolve_colloids(prob, cfg);
  REQUIRE(rec.time.size() == 1);
  CHECK(rec.time[0] == 0.0);
  REQUIRE(rec.pos.size() == 1);
  CHECK(rec.pos[0][0].x == 0.0);
  CHECK(rec.pos[0][0].y == 0.0);
  // zero data gives a zero right-hand side, so the rates are exactly zero
  CHECK(rec.vel[0][0].x == 0.0);
  CHECK(rec.vel[0][0].y == 0.0);
  CHECK(rec.omega[0][0] == 0.0);
  CHECK(rec.force_residual[0] == 0.0);
  CHECK(rec.torque_residual[0] == 0.0);
}

TEST_CASE("free disk on the Poiseuille centerline drifts straight") {
  StokesProblem prob;
  prob.geom.outer = Geometry::Outer::Rect;
  prob.geom.lo = {-1.0, -0.5};
  prob.geom.length = 2.0;
  prob.geom.height = 1.0;
  Colloid c;
  c.shape = ColloidShape::Disk;
  c.size = 0.15;
  c.pos = {0.0, 0.0};
  c.free = true;
  prob.geom.colloids.push_back(c);
  prob.refine = {0.15, 2, 2};
  prob.order = 2;
  prob.nu = 1.0;
  prob.flow.body_force = [](const Vec2&) { return Vec2{0.0, 0.0}; };
  prob.flow.body_force_div = [](const Vec2&) { return 0.0; };
  prob.flow.wall_velocity = [](const Vec2& x) {
    return Vec2{1.0 - 4.0 * x.y * x.y, 0.0};
  };

  DynamicsConfig cfg;
  cfg.steps = 0;
  TrajectoryRecord rec = evolve_colloids(prob, cfg);
  Vec2 v = rec.vel[0][0];
  CHECK(v.x > 0.5);
  // cloud generation is mirror-symmetric about the centerline, so the lateral
  // rate is at residual level
  CHECK(std::abs(v.y) < 1e-6);
  CHECK(std::abs(rec.omega[0][0]) < 1e-5);
}

TEST_CASE("free disk in Couette shear spins at half the vorticity") {
  StokesProblem prob;
  prob.geom.outer = Geometry::Outer::Rect;
  prob.geom.lo = {-1.0, -1.0};
  prob.geom.length = 2.0;
  prob.geom.height = 2.0;
  Colloid c;
  c.shape = ColloidShape::Disk;
  c.size = 0.2;
  c.pos = {0.0, 0.0};
  c.free = true;
  prob.geom.colloids.push_back(c);
  prob.refine = {0.15, 2, 2};
  prob.order = 2;
  prob.nu = 1.0;
  prob.flow.body_force = [](const Vec2&) { return Vec2{0.0, 0.0}; };
  prob.flow.body_force_div = [](const Vec2&) { return 0.0; };
  prob.flow.wall_velocity = [](const Vec2& x) { return Vec2{x.y, 0.0}; };

  DynamicsConfig cfg;
  cfg.steps = 2;
  cfg.dt = 0.05;
  TrajectoryRecord rec = evolve_colloids(prob, cfg);

  REQUIRE(rec.time.size() == 3);
  CHECK(rec.time[1] == doctest::Approx(0.05));
  CHECK(rec.time[2] == doctest::Approx(0.10));
  REQUIRE(rec.iters.size() == 3);
  REQUIRE(rec.force_residual.size() == 3);
  for (std::size_t s = 0; s < rec.time.size(); ++s) {
    // ambient vorticity is -1, a force-free disk spins at half of it
    CHECK(std::abs(rec.omega[s][0] + 0.5) < 0.01);
    CHECK(std::abs(rec.vel[s][0].x) < 1e-4);
    CHECK(std::abs(rec.vel[s][0].y) < 1e-4);
    CHECK(rec.force_residual[s] < 1e-6);
    CHECK(rec.torque_residual[s] < 1e-6);
    CHECK(rec.rel_residual[s] < 1e-7);
  }
  // the disk stays at the stagnation point while rotating
  CHECK(std::abs(rec.pos[2][0].x) < 1e-4);
  CHECK(std::abs(rec.pos[2][0].y) < 1e-4);
}
