#include "mstokes/basis.hpp"

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

double falling(int a, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= a - i;
  return f;
}

// d^dx d^dy of ((x-cx)/s)^a ((y-cy)/s)^b evaluated at x.
double monomial_deriv(const Vec2& x, const Vec2& c, double s, int a, int b, int dx, int dy) {
  if (dx > a || dy > b) return 0.0;
  double X = (x.x - c.x) / s, Y = (x.y - c.y) / s;
  double v = falling(a, dx) * falling(b, dy) / std::pow(s, dx + dy);
  v *= std::pow(X, a - dx) * std::pow(Y, b - dy);
  return v;
}

std::vector<std::pair<int, int>> monomial_exponents(int deg_lo, int deg_hi) {
  std::vector<std::pair<int, int>> e;
  for (int d = deg_lo; d <= deg_hi; ++d)
    for (int ax = d; ax >= 0; --ax) e.push_back({ax, d - ax});
  return e;
}

}  // namespace

ScalarBasis::ScalarBasis(int order, const Vec2& center, double scale)
    : order_(order), center_(center), scale_(scale) {
  if (order < 0) throw StencilError("ScalarBasis: order must be nonnegative");
  if (scale <= 0.0) throw StencilError("ScalarBasis: scale must be positive");
  expo_ = monomial_exponents(0, order);
}

Eigen::VectorXd ScalarBasis::eval_deriv(const Vec2& x, int dx, int dy) const {
  Eigen::VectorXd out(size());
  for (int k = 0; k < size(); ++k)
    out[k] = monomial_deriv(x, center_, scale_, expo_[k].first, expo_[k].second, dx, dy);
  return out;
}

Eigen::MatrixXd ScalarBasis::eval_grad(const Vec2& x) const {
  Eigen::MatrixXd out(size(), 2);
  out.col(0) = eval_deriv(x, 1, 0);
  out.col(1) = eval_deriv(x, 0, 1);
  return out;
}

Eigen::VectorXd ScalarBasis::eval_laplacian(const Vec2& x) const {
  return eval_deriv(x, 2, 0) + eval_deriv(x, 0, 2);
}

DivFreeBasis::DivFreeBasis(int order, const Vec2& center, double scale)
    : order_(order), center_(center), scale_(scale) {
  if (order < 0) throw StencilError("DivFreeBasis: order must be nonnegative");
  if (scale <= 0.0) throw StencilError("DivFreeBasis: scale must be positive");
  expo_ = monomial_exponents(1, order + 1);
}

Eigen::VectorXd DivFreeBasis::stream_deriv(const Vec2& x, int dx, int dy) const {
  Eigen::VectorXd out(size());
  for (int k = 0; k < size(); ++k)
    out[k] = monomial_deriv(x, center_, scale_, expo_[k].first, expo_[k].second, dx, dy);
  return out;
}

Eigen::MatrixXd DivFreeBasis::eval(const Vec2& x) const {
  Eigen::MatrixXd out(size(), 2);
  out.col(0) = stream_deriv(x, 0, 1);
  out.col(1) = -stream_deriv(x, 1, 0);
  return out;
}

Eigen::MatrixXd DivFreeBasis::eval_grad(const Vec2& x) const {
  Eigen::MatrixXd out(size(), 4);
  out.col(0) = stream_deriv(x, 1, 1);   // du/dx
  out.col(1) = stream_deriv(x, 0, 2);   // du/dy
  out.col(2) = -stream_deriv(x, 2, 0);  // dv/dx
  out.col(3) = -stream_deriv(x, 1, 1);  // dv/dy
  return out;
}

Eigen::MatrixXd DivFreeBasis::eval_curlcurl(const Vec2& x) const {
  // curl of element k is -laplace(psi_k); curl curl = (d/dy, -d/dx) of that
  Eigen::MatrixXd out(size(), 2);
  out.col(0) = -(stream_deriv(x, 2, 1) + stream_deriv(x, 0, 3));
  out.col(1) = stream_deriv(x, 3, 0) + stream_deriv(x, 1, 2);
  return out;
}

}  // namespace mstokes
