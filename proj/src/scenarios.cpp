#include "mstokes/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <json.hpp>

#include "mstokes/assembly.hpp"
#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

constexpr double kPi = 3.1415926535897932385;

double regress_order(const std::vector<double>& h, const std::vector<double>& err) {
  // slope of log(err) against log(h)
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(h[i]), y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

StokesProblem problem_from(const SimConfig& cfg) {
  StokesProblem p;
  p.geom = cfg.geom;
  p.refine = cfg.refine;
  p.order = cfg.order;
  p.nu = cfg.nu;
  p.flow = make_flow(cfg);
  p.linear.tol = cfg.lin_tol;
  p.linear.max_iter = cfg.max_iter;
  p.linear.restart = cfg.restart;
  return p;
}

double rms_velocity_error(const PointCloud& pc, const Eigen::VectorXd& u,
                          const std::function<Vec2(const Vec2&)>& exact) {
  double acc = 0.0;
  for (int i = 0; i < pc.n(); ++i) {
    Vec2 e = exact(pc.pos[i]);
    double dx = u[2 * i] - e.x, dy = u[2 * i + 1] - e.y;
    acc += dx * dx + dy * dy;
  }
  return std::sqrt(acc / pc.n());
}

double rms_pressure_error(const PointCloud& pc, const Eigen::VectorXd& p,
                          const std::function<double(const Vec2&)>& exact) {
  // both fields shifted to zero mean: pressure is defined up to a constant
  const int n = pc.n();
  Eigen::VectorXd pe(n);
  for (int i = 0; i < n; ++i) pe[i] = exact(pc.pos[i]);
  double mh = p.mean(), me = pe.mean();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double d = (p[i] - mh) - (pe[i] - me);
    acc += d * d;
  }
  return std::sqrt(acc / n);
}

}  // namespace

// Half-period vortex: smooth, divergence-free for any frequency, and gentle
// enough that the coarsest convergence grids already sit in the asymptotic
// range of the high-order fits.
constexpr double kFreq = 0.5 * kPi;

Vec2 manufactured_velocity(const Vec2& x) {
  return {std::sin(kFreq * x.x) * std::cos(kFreq * x.y),
          -std::cos(kFreq * x.x) * std::sin(kFreq * x.y)};
}

double manufactured_pressure(const Vec2& x) {
  return std::cos(kFreq * x.x) * std::cos(kFreq * x.y);
}

Vec2 manufactured_body_force(const Vec2& x, double nu) {
  // f = -nu lap(u) + grad(p) with lap(u) = -2 k^2 u
  Vec2 u = manufactured_velocity(x);
  Vec2 gp{-kFreq * std::sin(kFreq * x.x) * std::cos(kFreq * x.y),
          -kFreq * std::cos(kFreq * x.x) * std::sin(kFreq * x.y)};
  return 2.0 * kFreq * kFreq * nu * u + gp;
}

double manufactured_body_force_div(const Vec2& x) {
  // div f = lap p since div u = 0
  return -2.0 * kFreq * kFreq * manufactured_pressure(x);
}

FlowData make_flow(const SimConfig& cfg) {
  FlowData fd;
  const Geometry g = cfg.geom;

  if (cfg.flow == FlowKind::Manufactured) {
    const double nu = cfg.nu;
    fd.wall_velocity = [](const Vec2& x) { return manufactured_velocity(x); };
    fd.body_force = [nu](const Vec2& x) { return manufactured_body_force(x, nu); };
    fd.body_force_div = [](const Vec2& x) { return manufactured_body_force_div(x); };
    return fd;
  }

  if (g.outer == Geometry::Outer::Disk) {
    if (cfg.wall_omega != 0.0) {
      const Vec2 c = g.disk_center;
      const double w = cfg.wall_omega;
      fd.wall_velocity = [c, w](const Vec2& x) {
        Vec2 r = x - c;
        return Vec2{-w * r.y, w * r.x};
      };
    }
    return fd;
  }

  if (cfg.flow == FlowKind::Poiseuille) {
    const double U = cfg.flow_u;
    const double x0 = g.lo.x, x1 = g.lo.x + g.length;
    const double yc = g.lo.y + 0.5 * g.height, hh = 0.5 * g.height;
    const double tol = 1e-9 * std::max(g.length, g.height);
    fd.wall_velocity = [=](const Vec2& p) {
      // parabolic profile on the inlet and outlet faces, no-slip elsewhere
      if (std::abs(p.x - x0) < tol || std::abs(p.x - x1) < tol) {
        double s = (p.y - yc) / hh;
        return Vec2{U * (1.0 - s * s), 0.0};
      }
      return Vec2{0.0, 0.0};
    };
  } else if (cfg.flow == FlowKind::Couette) {
    const double gam = cfg.flow_gamma;
    fd.wall_velocity = [gam](const Vec2& p) { return Vec2{gam * p.y, 0.0}; };
  }
  return fd;
}

ConvergenceReport scenario_manufactured(SimConfig cfg, const std::vector<int>& Ns) {
  cfg.geom = Geometry{};
  cfg.geom.lo = {0.0, 0.0};
  cfg.geom.length = 1.0;
  cfg.geom.height = 1.0;
  cfg.flow = FlowKind::Manufactured;

  ConvergenceReport rep;
  std::vector<double> hs, eus, eps_;
  for (int N : Ns) {
    cfg.refine.dx_inf = 1.0 / N;
    cfg.refine.levels = 1;
    cfg.refine.layers = 1;
    StokesProblem prob = problem_from(cfg);
    StokesResult res = solve_stokes(prob);

    ConvergenceRow row;
    row.N = N;
    row.h = 1.0 / N;
    row.err_u = rms_velocity_error(res.cloud, res.u, manufactured_velocity);
    row.err_p = rms_pressure_error(res.cloud, res.p, manufactured_pressure);
    rep.rows.push_back(row);

    KrylovRow kr;
    kr.dofs = 2 * res.cloud.n() + res.cloud.n() + 1;
    kr.iters = res.report.iterations;
    kr.setup_s = res.report.setup_seconds;
    kr.solve_s = res.report.solve_seconds;
    rep.krylov.push_back(kr);

    hs.push_back(row.h);
    eus.push_back(row.err_u);
    eps_.push_back(row.err_p);
  }
  rep.order_u = regress_order(hs, eus);
  rep.order_p = regress_order(hs, eps_);
  return rep;
}

CouetteReport scenario_couette(SimConfig cfg) {
  if (cfg.geom.outer != Geometry::Outer::Disk || cfg.geom.colloids.size() != 1)
    throw SetupError("couette scenario expects a disk outer boundary and one colloid");

  StokesProblem prob = problem_from(cfg);
  CouetteReport rep;
  rep.sol = solve_stokes(prob);

  // annular profile u_theta(r) = A r + B / r fixed by the two wall speeds
  const double R1 = cfg.geom.disk_radius;
  const double R2 = cfg.geom.colloids[0].size;
  const double w1 = cfg.wall_omega * R1;
  const double w2 = cfg.geom.colloids[0].omega * R2;
  Eigen::Matrix2d M;
  M << R2, 1.0 / R2, R1, 1.0 / R1;
  Eigen::Vector2d rhs2(w2, w1);
  Eigen::Vector2d AB = M.colPivHouseholderQr().solve(rhs2);

  const Vec2 c = cfg.geom.disk_center;
  double acc = 0.0;
  for (int i = 0; i < rep.sol.cloud.n(); ++i) {
    Vec2 r = rep.sol.cloud.pos[i] - c;
    double rad = r.norm();
    Vec2 that = r.perp() / rad;
    double uth = rep.sol.u[2 * i] * that.x + rep.sol.u[2 * i + 1] * that.y;
    double ex = AB[0] * rad + AB[1] / rad;
    acc += (uth - ex) * (uth - ex);
  }
  rep.rms_utheta = std::sqrt(acc / rep.sol.cloud.n());
  return rep;
}

GapSweepReport scenario_gap_sweep(SimConfig cfg, int n_gaps) {
  if (cfg.geom.outer != Geometry::Outer::Disk || cfg.geom.colloids.size() != 1)
    throw SetupError("gap sweep expects a disk outer boundary and one colloid");

  const double clearance = cfg.geom.disk_radius - cfg.geom.colloids[0].size;
  GapSweepReport rep;
  for (int k = 0; k < n_gaps; ++k) {
    double gap = 0.25 * clearance * std::pow(2.0, -k);
    SimConfig run = cfg;
    run.geom.colloids[0].pos =
        cfg.geom.disk_center + Vec2{clearance - gap, 0.0};
    // at least four spacings across the gap
    while (run.refine.boundary_spacing() > gap / 4.0 && run.refine.levels < 12)
      ++run.refine.levels;

    StokesProblem prob = problem_from(run);
    StokesResult res = solve_stokes(prob);
    ForceTorque ft = surface_traction(res.cloud, run.geom.colloids, run.order,
                                      run.nu, res.u, res.p, 0);
    rep.gap.push_back(gap);
    rep.force_mag.push_back(ft.force.norm());
    rep.pts_across_gap.push_back((int)(gap / run.refine.boundary_spacing()));
  }
  return rep;
}

ChannelReport scenario_channel(SimConfig cfg) {
  if (cfg.geom.colloids.size() != 1)
    throw SetupError("channel scenario expects exactly one colloid");

  ChannelReport rep;

  auto drag = [&](Vec2 vel, double omega, bool poiseuille) {
    SimConfig run = cfg;
    run.geom.colloids[0].free = false;
    run.geom.colloids[0].vel = vel;
    run.geom.colloids[0].omega = omega;
    run.flow = poiseuille ? FlowKind::Poiseuille : FlowKind::None;
    StokesProblem prob = problem_from(run);
    StokesResult res = solve_stokes(prob);
    return surface_traction(res.cloud, run.geom.colloids, run.order, run.nu,
                            res.u, res.p, 0);
  };

  rep.drag10 = drag({1.0, 0.0}, 0.0, false);
  rep.drag01 = drag({0.0, 1.0}, 0.0, false);
  rep.drag11 = drag({1.0, 1.0}, 0.0, false);

  auto norm3 = [](const ForceTorque& ft) {
    return std::sqrt(ft.force.norm2() + ft.torque * ft.torque);
  };
  ForceTorque lin{rep.drag11.force - rep.drag10.force - rep.drag01.force,
                  rep.drag11.torque - rep.drag10.torque - rep.drag01.torque};
  rep.linearity_residual = norm3(lin) / norm3(rep.drag11);

  // free colloid under the poiseuille drive
  {
    SimConfig run = cfg;
    run.geom.colloids[0].free = true;
    run.flow = FlowKind::Poiseuille;
    StokesProblem prob = problem_from(run);
    StokesResult res = solve_stokes(prob);
    rep.drift_vel = res.colloid_vel[0];
    rep.drift_omega = res.colloid_omega[0];
    rep.dofs = 2 * res.cloud.n() + 3 + res.cloud.n() + 1;
    ForceTorque ft = surface_traction(res.cloud, run.geom.colloids, run.order,
                                      run.nu, res.u, res.p, 0);
    rep.free_force_residual = ft.force.norm();
    rep.free_torque_residual = std::abs(ft.torque);
  }

  // the same rates prescribed must produce (near) zero load
  ForceTorque held = drag({0.0, 0.0}, 0.0, true);
  ForceTorque bal = drag(rep.drift_vel, rep.drift_omega, true);
  rep.balance_residual = norm3(bal) / norm3(held);
  return rep;
}

OrbitClass classify_orbit(const TrajectoryRecord& rec) {
  if (rec.colloid.size() != 2 || rec.time.size() < 3) return OrbitClass::Undetermined;
  const std::size_t n = rec.time.size();

  // accumulated (unwrapped) rotation of the relative position
  double swept = 0.0;
  std::size_t imin = 0;
  double dmin = std::numeric_limits<double>::infinity();
  Vec2 prev = rec.pos[0][1] - rec.pos[0][0];
  for (std::size_t s = 0; s < n; ++s) {
    Vec2 r = rec.pos[s][1] - rec.pos[s][0];
    if (s > 0) {
      swept += std::atan2(prev.cross(r), prev.dot(r));
      prev = r;
    }
    double d = r.norm();
    if (d < dmin) {
      dmin = d;
      imin = s;
    }
    if (std::abs(swept) >= 2.0 * kPi) return OrbitClass::Closed;
  }

  // open: x-separation grows monotonically after closest approach
  if (imin + 1 < n) {
    double last = std::abs(rec.pos[imin][1].x - rec.pos[imin][0].x);
    bool monotone = true;
    for (std::size_t s = imin + 1; s < n; ++s) {
      double dx = std::abs(rec.pos[s][1].x - rec.pos[s][0].x);
      if (dx < last - 1e-9) {
        monotone = false;
        break;
      }
      last = dx;
    }
    double first = std::abs(rec.pos[imin][1].x - rec.pos[imin][0].x);
    if (monotone && last > first) return OrbitClass::Open;
  }
  return OrbitClass::Undetermined;
}

ShearReport scenario_shear_pair(SimConfig cfg) {
  StokesProblem prob = problem_from(cfg);
  DynamicsConfig dyn;
  dyn.dt = cfg.dt;
  dyn.steps = cfg.steps;
  dyn.scheme = cfg.scheme;

  ShearReport rep;
  rep.rec = evolve_colloids(prob, dyn);
  rep.cls = classify_orbit(rep.rec);
  if (rep.rec.colloid.size() == 2) {
    for (std::size_t s = 0; s < rep.rec.time.size(); ++s) {
      Vec2 sum = rep.rec.pos[s][0] + rep.rec.pos[s][1];
      rep.max_antisymmetry = std::max(rep.max_antisymmetry, sum.norm());
    }
  }
  return rep;
}

NotchReport scenario_notched_channel(SimConfig cfg) {
  StokesProblem prob = problem_from(cfg);
  DynamicsConfig dyn;
  dyn.dt = cfg.dt;
  dyn.steps = cfg.steps;
  dyn.scheme = cfg.scheme;
  NotchReport rep;
  rep.rec = evolve_colloids(prob, dyn);
  return rep;
}

SimConfig default_manufactured_config() {
  SimConfig cfg;
  cfg.nu = 1.0;
  cfg.order = 2;
  cfg.geom.lo = {0.0, 0.0};
  cfg.geom.length = 1.0;
  cfg.geom.height = 1.0;
  cfg.refine = {1.0 / 16.0, 1, 1};
  cfg.flow = FlowKind::Manufactured;
  cfg.lin_tol = 1e-10;
  cfg.out_dir = "out/converge";
  return cfg;
}

SimConfig default_cylinders_config(double eccentricity) {
  SimConfig cfg;
  cfg.nu = 1.0;
  cfg.order = 4;
  cfg.geom.outer = Geometry::Outer::Disk;
  cfg.geom.disk_center = {0.0, 0.0};
  cfg.geom.disk_radius = 0.5 * kPi;
  cfg.wall_omega = 1.0 / kPi;
  Colloid inner;
  inner.shape = ColloidShape::Disk;
  inner.size = 0.1 * kPi;
  inner.pos = {eccentricity, 0.0};
  inner.omega = 10.0 / kPi;
  cfg.geom.colloids.push_back(inner);
  cfg.refine = {kPi / 32.0, 3, 3};
  cfg.lin_tol = 1e-10;
  cfg.out_dir = "out/cylinders";
  return cfg;
}

SimConfig default_channel_config() {
  SimConfig cfg;
  cfg.nu = 1.0;
  cfg.order = 4;
  cfg.geom.lo = {-3.0, -1.0};
  cfg.geom.length = 6.0;
  cfg.geom.height = 2.0;
  Colloid disk;
  disk.shape = ColloidShape::Disk;
  disk.size = 0.25;
  disk.pos = {0.0, 0.0};
  disk.free = true;
  cfg.geom.colloids.push_back(disk);
  cfg.refine = {0.125, 2, 2};
  cfg.flow = FlowKind::Poiseuille;
  cfg.flow_u = 1.0;
  cfg.lin_tol = 1e-10;
  cfg.out_dir = "out/channel";
  return cfg;
}

SimConfig default_shear_config(bool closed_orbit) {
  SimConfig cfg;
  cfg.nu = 1.0;
  cfg.order = 4;
  cfg.geom.lo = {-10.0, -10.0};
  cfg.geom.length = 20.0;
  cfg.geom.height = 20.0;
  Colloid a, b;
  a.shape = b.shape = ColloidShape::Disk;
  a.size = b.size = 1.0;
  a.free = b.free = true;
  if (closed_orbit) {
    a.pos = {-1.2, 0.0};
    b.pos = {1.2, 0.0};
  } else {
    a.pos = {-1.5, 2.0};
    b.pos = {1.5, -2.0};
  }
  cfg.geom.colloids.push_back(a);
  cfg.geom.colloids.push_back(b);
  cfg.refine = {0.5, 2, 2};
  cfg.flow = FlowKind::Couette;
  cfg.flow_gamma = 1.0;
  cfg.dt = 0.1;
  cfg.steps = closed_orbit ? 160 : 50;
  cfg.lin_tol = 1e-8;
  cfg.out_dir = closed_orbit ? "out/shear_closed" : "out/shear_open";
  return cfg;
}

SimConfig default_notch_config() {
  SimConfig cfg;
  cfg.nu = 1.0;
  cfg.order = 2;
  cfg.geom.lo = {-3.0, -1.0};
  cfg.geom.length = 6.0;
  cfg.geom.height = 2.0;
  cfg.geom.notch.enabled = true;
  cfg.geom.notch.x0 = -0.5;
  cfg.geom.notch.x1 = 0.5;
  cfg.geom.notch.depth = 0.4;
  Colloid sq;
  sq.shape = ColloidShape::Square;
  sq.size = 0.4;
  sq.pos = {-2.0, 0.0};
  sq.free = true;
  cfg.geom.colloids.push_back(sq);
  cfg.refine = {0.125, 2, 2};
  cfg.flow = FlowKind::Poiseuille;
  cfg.flow_u = 1.0;
  cfg.dt = 0.1;
  cfg.steps = 20;
  cfg.lin_tol = 1e-8;
  cfg.out_dir = "out/notch";
  return cfg;
}

namespace {

using nlohmann::json;

void write_config_echo(const SimConfig& cfg) {
  atomic_write(cfg.out_dir + "/config.ini", emit_config(cfg));
}

json report_json(const KrylovReport& rep) {
  return json{{"iterations", rep.iterations},
              {"rel_residual", rep.rel_residual},
              {"converged", rep.converged},
              {"coarse_fallback", rep.coarse_fallback},
              {"dominance_pressure", rep.dominance_pressure},
              {"dominance_schur", rep.dominance_schur}};
}

}  // namespace

void run_and_write_converge(const SimConfig& cfg) {
  ConvergenceReport rep = scenario_manufactured(cfg, {16, 32, 64});
  write_config_echo(cfg);
  write_convergence_csv(cfg.out_dir + "/convergence.csv", rep.rows);
  write_krylov_csv(cfg.out_dir + "/krylov.csv", rep.krylov);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    json j{{"scenario", "converge"},
           {"N", rep.rows[i].N},
           {"dofs", rep.krylov[i].dofs},
           {"iters", rep.krylov[i].iters},
           {"err_u", rep.rows[i].err_u},
           {"err_p", rep.rows[i].err_p}};
    append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
  }
  json j{{"scenario", "converge"},
         {"order_u", rep.order_u},
         {"order_p", rep.order_p}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

void run_and_write_cylinders(const SimConfig& cfg) {
  write_config_echo(cfg);
  const Vec2 off = cfg.geom.colloids.empty()
                       ? Vec2{0.0, 0.0}
                       : cfg.geom.colloids[0].pos - cfg.geom.disk_center;
  if (off.norm() < 1e-12) {
    CouetteReport rep = scenario_couette(cfg);
    write_field_csv(cfg.out_dir + "/field.csv", rep.sol.cloud, rep.sol.u, rep.sol.p);
    write_cloud_csv(cfg.out_dir + "/cloud.csv", rep.sol.cloud);
    json j{{"scenario", "cylinders"},
           {"dofs", 3 * rep.sol.cloud.n() + 1},
           {"rms_utheta", rep.rms_utheta},
           {"report", report_json(rep.sol.report)}};
    append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
  } else {
    StokesProblem prob = problem_from(cfg);
    StokesResult res = solve_stokes(prob);
    ForceTorque ft = surface_traction(res.cloud, cfg.geom.colloids, cfg.order,
                                      cfg.nu, res.u, res.p, 0);
    write_field_csv(cfg.out_dir + "/field.csv", res.cloud, res.u, res.p);
    write_cloud_csv(cfg.out_dir + "/cloud.csv", res.cloud);
    json j{{"scenario", "cylinders"},
           {"dofs", 3 * res.cloud.n() + 1},
           {"eccentricity", off.norm()},
           {"force", {ft.force.x, ft.force.y}},
           {"torque", ft.torque},
           {"report", report_json(res.report)}};
    append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
  }
}

void run_and_write_channel(const SimConfig& cfg) {
  write_config_echo(cfg);
  ChannelReport rep = scenario_channel(cfg);

  // echo the free-mode field for inspection
  SimConfig run = cfg;
  run.geom.colloids[0].free = true;
  run.flow = FlowKind::Poiseuille;
  StokesResult res = solve_stokes(problem_from(run));
  write_field_csv(cfg.out_dir + "/field.csv", res.cloud, res.u, res.p);
  write_cloud_csv(cfg.out_dir + "/cloud.csv", res.cloud);

  json j{{"scenario", "channel"},
         {"dofs", rep.dofs},
         {"drag_unit_x", {rep.drag10.force.x, rep.drag10.force.y, rep.drag10.torque}},
         {"drag_unit_y", {rep.drag01.force.x, rep.drag01.force.y, rep.drag01.torque}},
         {"linearity_residual", rep.linearity_residual},
         {"drift_vel", {rep.drift_vel.x, rep.drift_vel.y}},
         {"drift_omega", rep.drift_omega},
         {"balance_residual", rep.balance_residual},
         {"free_force_residual", rep.free_force_residual},
         {"free_torque_residual", rep.free_torque_residual},
         {"report", report_json(res.report)}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

void run_and_write_shear(const SimConfig& cfg) {
  write_config_echo(cfg);
  ShearReport rep = scenario_shear_pair(cfg);
  write_trajectory_csv(cfg.out_dir + "/trajectory.csv", rep.rec);
  const char* cls = rep.cls == OrbitClass::Open
                        ? "open"
                        : rep.cls == OrbitClass::Closed ? "closed" : "undetermined";
  double worst_force = 0.0, worst_iters = 0.0;
  for (double v : rep.rec.force_residual) worst_force = std::max(worst_force, v);
  for (int v : rep.rec.iters) worst_iters = std::max(worst_iters, (double)v);
  json j{{"scenario", "shear"},
         {"classification", cls},
         {"max_antisymmetry", rep.max_antisymmetry},
         {"worst_force_residual", worst_force},
         {"worst_iters", (int)worst_iters},
         {"steps", (int)rep.rec.time.size() - 1}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

void run_and_write_notch(const SimConfig& cfg) {
  write_config_echo(cfg);
  NotchReport rep = scenario_notched_channel(cfg);
  write_trajectory_csv(cfg.out_dir + "/trajectory.csv", rep.rec);
  double worst_force = 0.0;
  for (double v : rep.rec.force_residual) worst_force = std::max(worst_force, v);
  json j{{"scenario", "notch"},
         {"steps", (int)rep.rec.time.size() - 1},
         {"worst_force_residual", worst_force}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

void run_and_write_cloud_dump(const SimConfig& cfg, unsigned seed) {
  write_config_echo(cfg);
  PointCloud pc = generate_cloud(cfg.geom, cfg.refine);
  if (seed != 0) {
    // deterministic interior jitter for robustness experiments
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int i = 0; i < pc.n(); ++i) {
      if (pc.is_boundary(i)) continue;
      pc.pos[i].x += u(rng) * pc.spacing[i];
      pc.pos[i].y += u(rng) * pc.spacing[i];
    }
  }
  compute_supports(pc, cfg.order);
  build_neighbors(pc);
  write_cloud_csv(cfg.out_dir + "/cloud.csv", pc);
  json j{{"scenario", "cloud-dump"},
         {"points", pc.n()},
         {"dx_inf_measured", pc.dx_inf_measured},
         {"seed", seed}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

void run_and_write_solve_once(const SimConfig& cfg) {
  write_config_echo(cfg);
  StokesProblem prob = problem_from(cfg);
  prob.divergence_check = true;

  // export the assembled blocks alongside the solve
  PointCloud pc = generate_cloud(prob.geom, prob.refine);
  compute_supports(pc, prob.order);
  build_neighbors(pc);
  BlockSystem sys = assemble(pc, prob.geom.colloids, prob.order, prob.nu, prob.flow);
  write_matrix_market(cfg.out_dir + "/K.mtx", sys.K);
  write_matrix_market(cfg.out_dir + "/G.mtx", sys.G);
  write_matrix_market(cfg.out_dir + "/B.mtx", sys.B);
  write_matrix_market(cfg.out_dir + "/L.mtx", sys.L);

  StokesResult res = solve_on_cloud(prob, std::move(pc));
  write_field_csv(cfg.out_dir + "/field.csv", res.cloud, res.u, res.p);
  write_cloud_csv(cfg.out_dir + "/cloud.csv", res.cloud);
  std::vector<KrylovRow> kr{{sys.dofs.total(), res.report.iterations,
                             res.report.setup_seconds, res.report.solve_seconds}};
  write_krylov_csv(cfg.out_dir + "/krylov.csv", kr);
  json j{{"scenario", "solve-once"},
         {"dofs", sys.dofs.total()},
         {"max_divergence", res.max_divergence},
         {"lambda", res.lambda},
         {"report", report_json(res.report)}};
  append_summary_jsonl(cfg.out_dir + "/summary.jsonl", j.dump());
}

}  // namespace mstokes
