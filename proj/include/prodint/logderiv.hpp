#pragma once

#include <functional>

#include "prodint/curve.hpp"
#include "prodint/group.hpp"

namespace prodint {

// A curve of group elements with a declared differentiability order and an
// optional analytic derivative in the ambient representation.
class GroupCurve {
 public:
  using EvalFn = std::function<Elem(double)>;

  GroupCurve() = default;
  GroupCurve(GroupPtr G, double lo, double hi, int order, EvalFn eval,
             EvalFn ambient_derivative = nullptr);

  static GroupCurve constant(GroupPtr G, const Elem& g, double lo, double hi);
  // t -> exp(f(t) X) for a scalar curve f of order >= 1.
  static GroupCurve one_parameter(GroupPtr G, const Eigen::VectorXd& X, const Curve& f);

  const GroupPtr& group() const { return G_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  int order() const { return order_; }
  bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }

  Elem operator()(double t) const { return eval_(t); }
  Elem ambient_derivative(double t) const;

  GroupCurve mult(const GroupCurve& other) const;
  GroupCurve inverse() const;
  GroupCurve right_translated(const Elem& g) const;
  // mu composed with a monotone scalar reparameterization.
  GroupCurve composed_with(const Curve& rho) const;

 private:
  GroupPtr G_;
  double lo_ = 0.0, hi_ = 1.0;
  int order_ = 1;
  EvalFn eval_;
  EvalFn deriv_;
};

// The right logarithmic derivative: algebra coordinates of dR_{mu^-1}(mudot).
// Analytic derivatives are used when declared; otherwise fourth-order
// differences of log(mu(t + s) mu(t)^-1) with s of size 1e-4 * length.
Curve der(const GroupCurve& mu);

// Sup-grid residuals of the algebraic identities obeyed by der. Residuals on
// analytic inputs are pure rounding noise; with difference-quotient
// derivatives they inherit the h^4 truncation error.
double product_rule_residual(const GroupCurve& mu, const GroupCurve& nu, int grid = 257);
double inverse_rule_residual(const GroupCurve& mu, int grid = 257);
double quotient_rule_residual(const GroupCurve& mu, const GroupCurve& nu, int grid = 257);
double substitution_rule_residual(const GroupCurve& mu, const Curve& rho, int grid = 257);

}  // namespace prodint
