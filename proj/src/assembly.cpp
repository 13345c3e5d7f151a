#include "mstokes/assembly.hpp"

#include "mstokes/errors.hpp"
#include "mstokes/stencils.hpp"

namespace mstokes {

DofMap build_dofmap(const PointCloud& pc, const std::vector<Colloid>& colloids) {
  DofMap d;
  d.n = pc.n();
  d.free_slot.assign(colloids.size(), -1);
  for (std::size_t c = 0; c < colloids.size(); ++c)
    if (colloids[c].free) d.free_slot[c] = d.n_free++;
  return d;
}

Eigen::VectorXd BlockSystem::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd xu = x.head(dofs.n_u());
  Eigen::VectorXd xp = x.tail(dofs.n_p());
  Eigen::VectorXd y(dofs.total());
  y.head(dofs.n_u()) = K * xu + G * xp;
  y.tail(dofs.n_p()) = B * xu + L * xp;
  return y;
}

Eigen::VectorXd BlockSystem::rhs() const {
  Eigen::VectorXd b(dofs.total());
  b.head(dofs.n_u()) = f;
  b.tail(dofs.n_p()) = g;
  return b;
}

std::vector<double> arclength_weights(const PointCloud& pc, int c) {
  const auto& loop = pc.colloid_pts[c];
  const auto& arc = pc.colloid_arcpos[c];
  const double per = pc.colloid_perimeter[c];
  const std::size_t n = loop.size();
  if (n < 3) throw GeometryError("colloid boundary loop needs at least 3 points");
  std::vector<double> w(n);
  for (std::size_t q = 0; q < n; ++q) {
    std::size_t prev = (q + n - 1) % n, next = (q + 1) % n;
    double fwd = arc[next] - arc[q];
    if (fwd <= 0.0) fwd += per;
    double bwd = arc[q] - arc[prev];
    if (bwd <= 0.0) bwd += per;
    w[q] = 0.5 * (fwd + bwd);
  }
  return w;
}

BlockSystem assemble(const PointCloud& pc, const std::vector<Colloid>& colloids,
                     int order, double nu, const FlowData& flow) {
  BlockSystem S;
  S.dofs = build_dofmap(pc, colloids);
  S.nu = nu;
  const DofMap& d = S.dofs;
  const int N = pc.n();
  const int nud = d.n_u();
  const int np1 = d.n_p();

  std::vector<Triplet> tK, tG, tB, tL;
  S.f = Eigen::VectorXd::Zero(nud);
  S.g = Eigen::VectorXd::Zero(np1);

  auto bf = [&](const Vec2& x) { return flow.body_force ? flow.body_force(x) : Vec2{0.0, 0.0}; };
  auto bfdiv = [&](const Vec2& x) { return flow.body_force_div ? flow.body_force_div(x) : 0.0; };
  auto wallv = [&](const Vec2& x) { return flow.wall_velocity ? flow.wall_velocity(x) : Vec2{0.0, 0.0}; };

  for (int i = 0; i < N; ++i) {
    const bool bdry = pc.is_boundary(i);

    if (!bdry) {
      Stencil cc = curlcurl_stencil(pc, i, order);
      for (std::size_t k = 0; k < cc.cols.size(); ++k) {
        int j = cc.cols[k];
        tK.push_back({d.ux(i), d.ux(j), nu * cc.w(0, 2 * k)});
        tK.push_back({d.ux(i), d.uy(j), nu * cc.w(0, 2 * k + 1)});
        tK.push_back({d.uy(i), d.ux(j), nu * cc.w(1, 2 * k)});
        tK.push_back({d.uy(i), d.uy(j), nu * cc.w(1, 2 * k + 1)});
      }
      StaggeredStencils st = staggered_stencil(pc, i, order, false);
      for (std::size_t k = 0; k < st.grad.cols.size(); ++k) {
        int j = st.grad.cols[k];
        tG.push_back({d.ux(i), j, st.grad.w(0, k)});
        tG.push_back({d.uy(i), j, st.grad.w(1, k)});
        tL.push_back({i, j, st.lap.w(0, k)});
      }
      Vec2 F = bf(pc.pos[i]);
      S.f[d.ux(i)] = F.x;
      S.f[d.uy(i)] = F.y;
      S.g[i] = bfdiv(pc.pos[i]);
    } else {
      // Dirichlet velocity rows, scaled to the curl-curl magnitude nu/eps^2.
      const double s = nu / (pc.eps[i] * pc.eps[i]);
      const int reg = pc.region[i];
      if (reg == kWall) {
        Vec2 w = wallv(pc.pos[i]);
        tK.push_back({d.ux(i), d.ux(i), s});
        tK.push_back({d.uy(i), d.uy(i), s});
        S.f[d.ux(i)] = s * w.x;
        S.f[d.uy(i)] = s * w.y;
      } else {
        const Colloid& c = colloids[reg];
        Vec2 rel = pc.pos[i] - c.pos;
        if (!c.free) {
          Vec2 w{c.vel.x - c.omega * rel.y, c.vel.y + c.omega * rel.x};
          tK.push_back({d.ux(i), d.ux(i), s});
          tK.push_back({d.uy(i), d.uy(i), s});
          S.f[d.ux(i)] = s * w.x;
          S.f[d.uy(i)] = s * w.y;
        } else {
          // u = V + Omega x r with (V, Omega) unknown; homogeneous rows.
          tK.push_back({d.ux(i), d.ux(i), s});
          tK.push_back({d.ux(i), d.mode(reg, 0), -s});
          tK.push_back({d.ux(i), d.mode(reg, 2), s * rel.y});
          tK.push_back({d.uy(i), d.uy(i), s});
          tK.push_back({d.uy(i), d.mode(reg, 1), -s});
          tK.push_back({d.uy(i), d.mode(reg, 2), -s * rel.x});
        }
      }

      // Pressure row: constrained staggered Laplacian. The Neumann data
      // dp/dn = n.f - nu n.curl(curl u) enters through the constraint
      // coefficient beta; the velocity part moves to the left-hand side.
      StaggeredStencils st = staggered_stencil(pc, i, order, true);
      for (std::size_t k = 0; k < st.lap.cols.size(); ++k)
        tL.push_back({i, st.lap.cols[k], st.lap.w(0, k)});
      const double beta = st.lap.beta[0];
      Stencil cc = curlcurl_stencil(pc, i, order);
      const Vec2 nrm = pc.normal[i];
      for (std::size_t k = 0; k < cc.cols.size(); ++k) {
        int j = cc.cols[k];
        double bx = nrm.x * cc.w(0, 2 * k) + nrm.y * cc.w(1, 2 * k);
        double by = nrm.x * cc.w(0, 2 * k + 1) + nrm.y * cc.w(1, 2 * k + 1);
        tB.push_back({i, d.ux(j), -beta * nu * bx});
        tB.push_back({i, d.uy(j), -beta * nu * by});
      }
      Vec2 F = bf(pc.pos[i]);
      S.g[i] = bfdiv(pc.pos[i]) - beta * (nrm.x * F.x + nrm.y * F.y);
    }

    tL.push_back({i, N, 1.0});
  }
  for (int j = 0; j < N; ++j) tL.push_back({N, j, 1.0});

  // Force and torque balance of each free colloid: quadrature of the
  // reconstructed traction along its boundary loop equals minus the external
  // load.
  for (std::size_t ci = 0; ci < colloids.size(); ++ci) {
    if (!colloids[ci].free) continue;
    const int c = (int)ci;
    const int r0 = d.mode(c, 0), r1 = d.mode(c, 1), r2 = d.mode(c, 2);
    std::vector<double> ds = arclength_weights(pc, c);
    const auto& loop = pc.colloid_pts[c];
    for (std::size_t q = 0; q < loop.size(); ++q) {
      const int j = loop[q];
      const double w = ds[q];
      StressStencil ss = stress_stencil(pc, j, order, nu);
      const Vec2 nrm = pc.normal[j];
      const Vec2 arm = pc.pos[j] - colloids[ci].pos;
      for (std::size_t k = 0; k < ss.cols.size(); ++k) {
        int jj = ss.cols[k];
        double px = nrm.x * ss.wp(0, k) + nrm.y * ss.wp(1, k);
        double py = nrm.x * ss.wp(2, k) + nrm.y * ss.wp(3, k);
        tG.push_back({r0, jj, w * px});
        tG.push_back({r1, jj, w * py});
        tG.push_back({r2, jj, w * (arm.x * py - arm.y * px)});
        double uxx = nrm.x * ss.wu(0, 2 * k) + nrm.y * ss.wu(1, 2 * k);
        double uxy = nrm.x * ss.wu(0, 2 * k + 1) + nrm.y * ss.wu(1, 2 * k + 1);
        double uyx = nrm.x * ss.wu(2, 2 * k) + nrm.y * ss.wu(3, 2 * k);
        double uyy = nrm.x * ss.wu(2, 2 * k + 1) + nrm.y * ss.wu(3, 2 * k + 1);
        tK.push_back({r0, d.ux(jj), w * uxx});
        tK.push_back({r0, d.uy(jj), w * uxy});
        tK.push_back({r1, d.ux(jj), w * uyx});
        tK.push_back({r1, d.uy(jj), w * uyy});
        tK.push_back({r2, d.ux(jj), w * (arm.x * uyx - arm.y * uxx)});
        tK.push_back({r2, d.uy(jj), w * (arm.x * uyy - arm.y * uxy)});
      }
    }
    Vec2 Fe = ci < flow.ext_force.size() ? flow.ext_force[ci] : Vec2{0.0, 0.0};
    double Te = ci < flow.ext_torque.size() ? flow.ext_torque[ci] : 0.0;
    S.f[r0] = -Fe.x;
    S.f[r1] = -Fe.y;
    S.f[r2] = -Te;
  }

  S.K = Csr::from_triplets(nud, nud, tK);
  S.G = Csr::from_triplets(nud, np1, tG);
  S.B = Csr::from_triplets(np1, nud, tB);
  S.L = Csr::from_triplets(np1, np1, tL);

  S.vel_component.assign(nud, 0);
  for (int i = 0; i < N; ++i) {
    S.vel_component[d.ux(i)] = 0;
    S.vel_component[d.uy(i)] = 1;
  }
  for (int k = 2 * N; k < nud; ++k) S.vel_component[k] = 2;
  return S;
}

ForceTorque surface_traction(const PointCloud& pc, const std::vector<Colloid>& colloids,
                             int order, double nu, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& p, int c) {
  std::vector<double> ds = arclength_weights(pc, c);
  const auto& loop = pc.colloid_pts[c];
  ForceTorque ft;
  for (std::size_t q = 0; q < loop.size(); ++q) {
    const int j = loop[q];
    StressStencil ss = stress_stencil(pc, j, order, nu);
    const std::size_t nc = ss.cols.size();
    Eigen::VectorXd pv(nc), uv(2 * nc);
    for (std::size_t k = 0; k < nc; ++k) {
      pv[k] = p[ss.cols[k]];
      uv[2 * k] = u[2 * ss.cols[k]];
      uv[2 * k + 1] = u[2 * ss.cols[k] + 1];
    }
    Eigen::VectorXd sig = ss.wp * pv + ss.wu * uv;  // (xx, xy, yx, yy)
    const Vec2 nrm = pc.normal[j];
    Vec2 t{nrm.x * sig[0] + nrm.y * sig[1], nrm.x * sig[2] + nrm.y * sig[3]};
    const Vec2 arm = pc.pos[j] - colloids[c].pos;
    ft.force += ds[q] * t;
    ft.torque += ds[q] * (arm.x * t.y - arm.y * t.x);
  }
  return ft;
}

}  // namespace mstokes
