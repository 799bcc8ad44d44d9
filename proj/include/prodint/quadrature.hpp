#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace prodint {

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t)
      : std::runtime_error(what), t_(t) {}
  double offending_t() const { return t_; }

 private:
  double t_;
};

using VectorFn = std::function<Eigen::VectorXd(double)>;

// Composite Simpson with interval halving until two successive refinements
// differ by less than rel_tol relative in the max norm. Orientation follows
// the usual sign conventions, and a == b yields zero.
Eigen::VectorXd adaptive_simpson(const VectorFn& f, double a, double b,
                                 double rel_tol = 1e-12);

// 5-point Gauss-Legendre on [a, b].
Eigen::VectorXd gauss5(const VectorFn& f, double a, double b);

// Cached antiderivative t -> int_lo^t f. Cells are aligned to the supplied
// breakpoints and refined uniformly; each cell uses Gauss-Legendre, so smooth
// integrands are resolved far below the toolkit's tolerances.
class Antiderivative {
 public:
  Antiderivative() = default;
  Antiderivative(VectorFn f, double lo, double hi,
                 const std::vector<double>& breakpoints = {},
                 int cells_per_piece = 1024);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Eigen::VectorXd operator()(double t) const;  // int_lo^t f
  Eigen::VectorXd total() const { return cumulative_.back(); }

 private:
  VectorFn f_;
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> nodes_;
  std::vector<Eigen::VectorXd> cumulative_;
};

}  // namespace prodint
