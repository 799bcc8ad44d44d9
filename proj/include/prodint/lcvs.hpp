#pragma once

#include <Eigen/Core>

#include "prodint/curve.hpp"
#include "prodint/quadrature.hpp"
#include "prodint/seminorm.hpp"

namespace prodint {

// int_a^b c, with the usual orientation conventions. [a, b] (or [b, a]) has
// to lie in the domain of c.
Eigen::VectorXd riemann_integral(const Curve& c, double a, double b,
                                 double rel_tol = 1e-12);
inline Eigen::VectorXd riemann_integral(const Curve& c) {
  return riemann_integral(c, c.lo(), c.hi());
}

// Sum of the segment integrals; additive under breakpoint refinement.
Eigen::VectorXd piecewise_integral(const PiecewiseCurve& pw, double rel_tol = 1e-12);

struct GridSupremum {
  double value = 0.0;
  int grid_size = 0;  // the reported value is a lower bound over this grid
};

// sup over a uniform grid of max_{0<=m<=s} p(c^(m)(t)).
GridSupremum ck_seminorm(const Curve& c, const Seminorm& p, int s, int grid = 1025);

// int p(c(s)) ds over the whole domain of c.
double l1_seminorm(const Curve& c, const Seminorm& p, double rel_tol = 1e-12);
double l1_seminorm(const PiecewiseCurve& pw, const Seminorm& p, double rel_tol = 1e-12);

// Piecewise-linear interpolant on n uniform segments matching c at the nodes.
PiecewiseCurve polygon_approx(const Curve& c, int n);

// Mollifier profile n * c0 * b(n t) supported in (-1/n, 1/n) with unit
// integral; derivative evaluations of every order.
class Mollifier {
 public:
  explicit Mollifier(int n);
  int n() const { return n_; }
  double support_radius() const { return 1.0 / double(n_); }
  double eval(double t, int s = 0) const;

 private:
  int n_;
};

// Smoothing by convolution with the mollifier of width 1/n; the input is
// extended constantly by its endpoint values, so the output lives on the same
// interval. Output order is unbounded.
Curve convolve(const PiecewiseCurve& pw, int n);
Curve convolve(const Curve& c, int n);

// p-fold antiderivative with prescribed initial jet:
//   I[1](X, c) = X + int_lo^t c,   I[p](X1..Xp, c) = I[1](Xp, I[p-1](X1..X_{p-1}, c)).
Curve iterated_integrate(const std::vector<Eigen::VectorXd>& jets, const Curve& c);

}  // namespace prodint
