#include "mstokes/stencils.hpp"

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

std::vector<int> center_and_neighbors(const PointCloud& pc, int i) {
  std::vector<int> cols;
  cols.reserve(pc.neigh[i].size() + 1);
  cols.push_back(i);
  cols.insert(cols.end(), pc.neigh[i].begin(), pc.neigh[i].end());
  return cols;
}

// On a rank-deficient fit, verify the operator row is still reproduced on the
// fitted polynomial space; a genuinely singular neighborhood (e.g. collinear
// points) cannot represent second derivatives and must fail loudly.
void check_reproduction(const WlsFit& fit, const Eigen::MatrixXd& design,
                        const Eigen::VectorXd& f, int i, const char* what) {
  if (!fit.rank_deficient()) return;
  Eigen::VectorXd predicted = design.transpose() * fit.stencil_row(f);
  double scale = std::max(1.0, f.norm());
  if ((predicted - f).norm() > 1e-8 * scale)
    throw StencilError(std::string(what) + ": singular neighborhood at point " +
                       std::to_string(i));
}

}  // namespace

Stencil standard_mls_stencil(const PointCloud& pc, int i, int m, ScalarOp op) {
  std::vector<int> cols = center_and_neighbors(pc, i);
  int n = (int)cols.size();
  // No hard sample-count gate: rank-deficient fits go through the
  // pseudo-inverse, and the reproduction check below rejects neighborhoods
  // that cannot determine the requested functional. A symmetric cross can
  // legitimately produce the classical Laplacian with fewer samples than
  // dim(pi_m).
  ScalarBasis basis(m, pc.pos[i], pc.eps[i]);
  Eigen::MatrixXd design(n, basis.size());
  Eigen::VectorXd weight(n);
  for (int t = 0; t < n; ++t) {
    design.row(t) = basis.eval(pc.pos[cols[t]]);
    weight[t] = pair_weight(pc, i, cols[t]);
  }
  WlsFit fit = WlsFit::compute(design, weight);

  std::vector<Eigen::VectorXd> rows;
  switch (op) {
    case ScalarOp::Value:
      rows.push_back(basis.eval(pc.pos[i]));
      break;
    case ScalarOp::Grad:
      rows.push_back(basis.eval_deriv(pc.pos[i], 1, 0));
      rows.push_back(basis.eval_deriv(pc.pos[i], 0, 1));
      break;
    case ScalarOp::Laplacian:
      rows.push_back(basis.eval_laplacian(pc.pos[i]));
      break;
    case ScalarOp::Hessian:
      rows.push_back(basis.eval_deriv(pc.pos[i], 2, 0));
      rows.push_back(basis.eval_deriv(pc.pos[i], 1, 1));
      rows.push_back(basis.eval_deriv(pc.pos[i], 1, 1));
      rows.push_back(basis.eval_deriv(pc.pos[i], 0, 2));
      break;
  }

  Stencil st;
  st.center = i;
  st.cols = cols;
  st.w.resize((int)rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    check_reproduction(fit, design, rows[r], i, "standard_mls_stencil");
    st.w.row((int)r) = fit.stencil_row(rows[r]);
  }
  return st;
}

StaggeredStencils staggered_stencil(const PointCloud& pc, int i, int m, bool neumann) {
  const std::vector<int>& nb = pc.neigh[i];
  int ne = (int)nb.size();
  if (ne < poly_dim(m))
    throw StencilError("staggered_stencil: point " + std::to_string(i) + " has " +
                       std::to_string(ne) + " edges, order " + std::to_string(m) +
                       " needs at least " + std::to_string(poly_dim(m)));
  if (neumann && !pc.is_boundary(i))
    throw StencilError("staggered_stencil: Neumann constraint requested at interior point " +
                       std::to_string(i));

  // Sample row 0 is the self edge (i,i): midpoint x_i, difference phi_i -
  // phi_i = 0. It adds no column to the stencil but anchors the fit at the
  // center; without it the Laplacian row of every interior point has an
  // identically zero diagonal (constant edge data fits a constant), which
  // destroys diagonal-based preconditioning downstream.
  ScalarBasis basis(m, pc.pos[i], pc.eps[i]);
  Eigen::MatrixXd design(ne + 1, basis.size());
  Eigen::VectorXd weight(ne + 1);
  design.row(0) = basis.eval(pc.pos[i]);
  weight[0] = pair_weight(pc, i, i);
  for (int e = 0; e < ne; ++e) {
    Vec2 mid = (pc.pos[i] + pc.pos[nb[e]]) * 0.5;
    design.row(e + 1) = basis.eval(mid);
    weight[e + 1] = pair_weight(pc, i, nb[e]);
  }
  Eigen::MatrixXd cons;
  if (neumann) {
    const Vec2& nrm = pc.normal[i];
    Eigen::MatrixXd g = basis.eval_grad(pc.pos[i]);
    cons = 0.5 * (nrm.x * g.col(0) + nrm.y * g.col(1)).transpose();
  }
  WlsFit fit = WlsFit::compute(design, weight, cons);

  // gradient = (1/2) grad p*, Laplacian = (1/4) div grad p*, at the center
  Eigen::MatrixXd grad_basis = basis.eval_grad(pc.pos[i]);
  Eigen::VectorXd fgx = 0.5 * grad_basis.col(0);
  Eigen::VectorXd fgy = 0.5 * grad_basis.col(1);
  Eigen::VectorXd flap = 0.25 * basis.eval_laplacian(pc.pos[i]);

  auto build = [&](const std::vector<Eigen::VectorXd>& fs) {
    Stencil st;
    st.center = i;
    st.cols.push_back(i);
    st.cols.insert(st.cols.end(), nb.begin(), nb.end());
    st.w = Eigen::MatrixXd::Zero((int)fs.size(), ne + 1);
    st.beta = Eigen::VectorXd::Zero((int)fs.size());
    for (std::size_t r = 0; r < fs.size(); ++r) {
      check_reproduction(fit, design, fs[r], i, "staggered_stencil");
      Eigen::VectorXd s = fit.stencil_row(fs[r]);
      // samples are differences phi_j - phi_i: the center column collects
      // minus the sum of the edge coefficients; s[0] multiplies the zero
      // self-sample and drops out
      st.w.row((int)r).tail(ne) = s.tail(ne);
      st.w((int)r, 0) = -s.tail(ne).sum();
      if (neumann) st.beta[(int)r] = fit.constraint_row(fs[r])[0];
    }
    return st;
  };

  StaggeredStencils out;
  out.grad = build({fgx, fgy});
  out.lap = build({flap});
  return out;
}

StaggeredVectorOps staggered_vector_ops(const PointCloud& pc, int i, int m) {
  const std::vector<int>& nb = pc.neigh[i];
  int ne = (int)nb.size();
  if (ne < poly_dim(m))
    throw StencilError("staggered_vector_ops: point " + std::to_string(i) + " has " +
                       std::to_string(ne) + " edges, order " + std::to_string(m) +
                       " needs at least " + std::to_string(poly_dim(m)));
  // Self edge (i,i) first, as in staggered_stencil: radial sample
  // u(x_i) . (x_i - x_i) = 0, so its edge_to_dof row stays zero.
  ScalarBasis basis(m, pc.pos[i], pc.eps[i]);
  Eigen::MatrixXd design(ne + 1, basis.size());
  Eigen::VectorXd weight(ne + 1);
  design.row(0) = basis.eval(pc.pos[i]);
  weight[0] = pair_weight(pc, i, i);
  for (int e = 0; e < ne; ++e) {
    Vec2 mid = (pc.pos[i] + pc.pos[nb[e]]) * 0.5;
    design.row(e + 1) = basis.eval(mid);
    weight[e + 1] = pair_weight(pc, i, nb[e]);
  }
  WlsFit fit = WlsFit::compute(design, weight);

  // edge sample r_e = (1/2)(u_i + u_j) . (x_j - x_i), linear in both endpoints
  Eigen::MatrixXd edge_to_dof = Eigen::MatrixXd::Zero(ne + 1, 2 * (ne + 1));
  for (int e = 0; e < ne; ++e) {
    Vec2 d = pc.pos[nb[e]] - pc.pos[i];
    edge_to_dof(e + 1, 0) += 0.5 * d.x;
    edge_to_dof(e + 1, 1) += 0.5 * d.y;
    edge_to_dof(e + 1, 2 * (e + 1)) += 0.5 * d.x;
    edge_to_dof(e + 1, 2 * (e + 1) + 1) += 0.5 * d.y;
  }

  Eigen::MatrixXd grad_basis = basis.eval_grad(pc.pos[i]);
  Eigen::VectorXd fux = 0.5 * grad_basis.col(0);
  Eigen::VectorXd fuy = 0.5 * grad_basis.col(1);
  Eigen::VectorXd fdiv = 0.25 * basis.eval_laplacian(pc.pos[i]);

  auto build = [&](const std::vector<Eigen::VectorXd>& fs) {
    Stencil st;
    st.center = i;
    st.cols.push_back(i);
    st.cols.insert(st.cols.end(), nb.begin(), nb.end());
    st.w.resize((int)fs.size(), 2 * (ne + 1));
    for (std::size_t r = 0; r < fs.size(); ++r) {
      check_reproduction(fit, design, fs[r], i, "staggered_vector_ops");
      st.w.row((int)r) = fit.stencil_row(fs[r]).transpose() * edge_to_dof;
    }
    return st;
  };

  StaggeredVectorOps out;
  out.recon = build({fux, fuy});
  out.div = build({fdiv});
  return out;
}

Stencil curlcurl_stencil(const PointCloud& pc, int i, int m) {
  std::vector<int> cols = center_and_neighbors(pc, i);
  int n = (int)cols.size();
  DivFreeBasis basis(m, pc.pos[i], pc.eps[i]);
  if (2 * n < basis.size())
    throw StencilError("curlcurl_stencil: point " + std::to_string(i) +
                       " has too few neighbors for order " + std::to_string(m));
  Eigen::MatrixXd design(2 * n, basis.size());
  Eigen::VectorXd weight(2 * n);
  for (int t = 0; t < n; ++t) {
    Eigen::MatrixXd uv = basis.eval(pc.pos[cols[t]]);
    design.row(2 * t) = uv.col(0);
    design.row(2 * t + 1) = uv.col(1);
    weight[2 * t] = weight[2 * t + 1] = pair_weight(pc, i, cols[t]);
  }
  WlsFit fit = WlsFit::compute(design, weight);

  Eigen::MatrixXd cc = basis.eval_curlcurl(pc.pos[i]);
  Stencil st;
  st.center = i;
  st.cols = cols;
  st.w.resize(2, 2 * n);
  for (int r = 0; r < 2; ++r) {
    Eigen::VectorXd f = cc.col(r);
    check_reproduction(fit, design, f, i, "curlcurl_stencil");
    st.w.row(r) = fit.stencil_row(f);
  }
  return st;
}

StressStencil stress_stencil(const PointCloud& pc, int i, int m, double nu) {
  std::vector<int> cols = center_and_neighbors(pc, i);
  int n = (int)cols.size();
  ScalarBasis pbasis(m, pc.pos[i], pc.eps[i]);
  DivFreeBasis vbasis(m, pc.pos[i], pc.eps[i]);
  if (n < poly_dim(m) || 2 * n < vbasis.size())
    throw StencilError("stress_stencil: point " + std::to_string(i) +
                       " has too few neighbors for order " + std::to_string(m));
  Eigen::MatrixXd pdesign(n, pbasis.size());
  Eigen::MatrixXd vdesign(2 * n, vbasis.size());
  Eigen::VectorXd pweight(n), vweight(2 * n);
  for (int t = 0; t < n; ++t) {
    double w = pair_weight(pc, i, cols[t]);
    pdesign.row(t) = pbasis.eval(pc.pos[cols[t]]);
    pweight[t] = w;
    Eigen::MatrixXd uv = vbasis.eval(pc.pos[cols[t]]);
    vdesign.row(2 * t) = uv.col(0);
    vdesign.row(2 * t + 1) = uv.col(1);
    vweight[2 * t] = vweight[2 * t + 1] = w;
  }
  WlsFit pfit = WlsFit::compute(pdesign, pweight);
  WlsFit vfit = WlsFit::compute(vdesign, vweight);

  Eigen::VectorXd q_row_f = pbasis.eval(pc.pos[i]);
  Eigen::MatrixXd g = vbasis.eval_grad(pc.pos[i]);  // [dxu, dyu, dxv, dyv]
  check_reproduction(pfit, pdesign, q_row_f, i, "stress_stencil");

  StressStencil st;
  st.center = i;
  st.cols = cols;
  st.wp = Eigen::MatrixXd::Zero(4, n);
  st.wu = Eigen::MatrixXd::Zero(4, 2 * n);

  Eigen::VectorXd q_row = pfit.stencil_row(q_row_f);
  st.wp.row(0) = -q_row;
  st.wp.row(3) = -q_row;

  // sigma_xx = -q* + nu dxu, sigma_xy = sigma_yx = (nu/2)(dyu + dxv),
  // sigma_yy = -q* + nu dyv
  Eigen::VectorXd f_xx = nu * g.col(0);
  Eigen::VectorXd f_xy = 0.5 * nu * (g.col(1) + g.col(2));
  Eigen::VectorXd f_yy = nu * g.col(3);
  check_reproduction(vfit, vdesign, f_xx, i, "stress_stencil");
  st.wu.row(0) = vfit.stencil_row(f_xx);
  st.wu.row(1) = vfit.stencil_row(f_xy);
  st.wu.row(2) = st.wu.row(1);
  st.wu.row(3) = vfit.stencil_row(f_yy);
  return st;
}

}  // namespace mstokes
