#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mstokes/vec2.hpp"

namespace mstokes {

// Monomials (x-c)^a (y-c)^b / s^(a+b) of total degree <= m, shifted to the
// stencil center and scaled by the support radius for conditioning.
class ScalarBasis {
 public:
  ScalarBasis(int order, const Vec2& center, double scale);

  int order() const { return order_; }
  int size() const { return (int)expo_.size(); }

  // Values of the partial derivative d^dx d^dy of every element at x.
  Eigen::VectorXd eval_deriv(const Vec2& x, int dx, int dy) const;

  Eigen::VectorXd eval(const Vec2& x) const { return eval_deriv(x, 0, 0); }
  // size x 2 matrix of gradients.
  Eigen::MatrixXd eval_grad(const Vec2& x) const;
  Eigen::VectorXd eval_laplacian(const Vec2& x) const;

 private:
  int order_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> expo_;
};

// Divergence-free vector polynomials of degree <= m: rotated gradients
// (dy psi, -dx psi) of scalar monomials psi of degree 1..m+1. Spans every
// divergence-free polynomial field of degree <= m.
class DivFreeBasis {
 public:
  DivFreeBasis(int order, const Vec2& center, double scale);

  int order() const { return order_; }
  int size() const { return (int)expo_.size(); }

  // size x 2: components (u, v) of every element at x.
  Eigen::MatrixXd eval(const Vec2& x) const;
  // size x 4: [du/dx, du/dy, dv/dx, dv/dy].
  Eigen::MatrixXd eval_grad(const Vec2& x) const;
  // size x 2: components of curl(curl(.)) at x.
  Eigen::MatrixXd eval_curlcurl(const Vec2& x) const;

 private:
  int order_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> expo_;  // stream-function monomial exponents

  // derivative d^dx d^dy of each stream monomial at x
  Eigen::VectorXd stream_deriv(const Vec2& x, int dx, int dy) const;
};

}  // namespace mstokes
