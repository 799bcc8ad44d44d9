#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace prodint {

// Order tag for curves with derivatives of every order.
inline constexpr int kOrderSmooth = 1 << 20;

// A curve t -> R^d on [lo, hi] with derivative evaluations up to a declared
// order: eval(t, s) returns the s-th derivative.
class Curve {
 public:
  using EvalFn = std::function<Eigen::VectorXd(double, int)>;

  Curve() = default;
  Curve(double lo, double hi, int dim, int order, EvalFn eval);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  int dim() const { return dim_; }
  int order() const { return order_; }

  Eigen::VectorXd operator()(double t) const { return eval(t, 0); }
  Eigen::VectorXd eval(double t, int s) const;

  // Factories.
  static Curve constant(const Eigen::VectorXd& value, double lo, double hi);
  static Curve zero(int dim, double lo, double hi);
  // coeffs[k] multiplies t^k (in the absolute variable t, not shifted).
  static Curve polynomial(std::vector<Eigen::VectorXd> coeffs, double lo, double hi);
  // c0 + sum_j cos_j * cos(j w t) + sin_j * sin(j w t), w = 2 pi / (hi - lo).
  static Curve fourier(Eigen::VectorXd c0,
                       std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> harmonics,
                       double lo, double hi);
  // Piecewise-linear interpolation through the given uniform node values.
  static Curve linear_nodes(std::vector<Eigen::VectorXd> values, double lo, double hi);

  // Combinators. Derivative bookkeeping is exact.
  Curve scaled(double c) const;
  Curve plus(const Curve& other) const;
  Curve restricted(double a, double b) const;
  // t -> f(t) * c(t) for a scalar curve f (dim 1).
  Curve scalar_mult(const Curve& f) const;
  // c composed with a scalar reparameterization rho (values of rho must land
  // in the domain of c); derivatives via truncated Taylor composition.
  Curve composed_with(const Curve& rho) const;

 private:
  double lo_ = 0.0, hi_ = 1.0;
  int dim_ = 0;
  int order_ = 0;
  EvalFn eval_;
};

// Breakpoints t0 < ... < tn with one curve per segment; no continuity across
// breakpoints is required. Evaluation is right-continuous at interior
// breakpoints.
class PiecewiseCurve {
 public:
  PiecewiseCurve() = default;
  PiecewiseCurve(std::vector<double> breakpoints, std::vector<Curve> segments);

  static PiecewiseCurve single(const Curve& c);
  // Constant value per segment.
  static PiecewiseCurve step(std::vector<double> breakpoints,
                             std::vector<Eigen::VectorXd> values);

  double lo() const { return breakpoints_.front(); }
  double hi() const { return breakpoints_.back(); }
  int dim() const { return segments_.front().dim(); }
  int min_order() const;
  std::size_t segment_count() const { return segments_.size(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const Curve& segment(std::size_t p) const { return segments_[p]; }
  std::size_t segment_index(double t) const;

  Eigen::VectorXd operator()(double t) const;
  Eigen::VectorXd eval(double t, int s) const;

  // Same curve with an extra breakpoint inserted.
  PiecewiseCurve refined_at(double t) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<Curve> segments_;
};

// Fourth-order finite differences, central on the interior and one-sided at
// the ends of [lo, hi].
Eigen::VectorXd fd4_derivative(const std::function<Eigen::VectorXd(double)>& f,
                               double t, double h, double lo, double hi);

// Residual of the derivative-consistency contract: compares eval(.; s+1)
// against fourth-order differences of eval(.; s) at interior sample points.
double derivative_consistency_residual(const Curve& c, int s, int samples = 33);

}  // namespace prodint
