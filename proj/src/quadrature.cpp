#include "prodint/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace prodint {

namespace {

Eigen::VectorXd checked_eval(const VectorFn& f, double t) {
  Eigen::VectorXd v = f(t);
  if (!v.allFinite())
    throw IntegrationError("integrand is not finite at t = " + std::to_string(t), t);
  return v;
}

}  // namespace

Eigen::VectorXd adaptive_simpson(const VectorFn& f, double a, double b,
                                 double rel_tol) {
  if (a == b) {
    Eigen::VectorXd v = checked_eval(f, a);
    return Eigen::VectorXd::Zero(v.size());
  }
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  // Trapezoid refinement; Simpson values extracted as (4 T_2n - T_n) / 3.
  const double len = b - a;
  Eigen::VectorXd ends = checked_eval(f, a) + checked_eval(f, b);
  long n = 8;
  Eigen::VectorXd interior = Eigen::VectorXd::Zero(ends.size());
  for (long i = 1; i < n; ++i) interior += checked_eval(f, a + len * double(i) / double(n));
  Eigen::VectorXd trap = (0.5 * ends + interior) * (len / double(n));
  Eigen::VectorXd simpson_prev;
  bool have_prev = false;

  const long max_intervals = 1L << 22;
  while (true) {
    // Double n: only new midpoints are evaluated.
    Eigen::VectorXd mid_sum = Eigen::VectorXd::Zero(ends.size());
    for (long i = 0; i < n; ++i)
      mid_sum += checked_eval(f, a + len * (double(i) + 0.5) / double(n));
    Eigen::VectorXd trap2 = 0.5 * trap + mid_sum * (len / double(2 * n));
    Eigen::VectorXd simpson = (4.0 * trap2 - trap) / 3.0;

    if (have_prev) {
      double diff = (simpson - simpson_prev).cwiseAbs().maxCoeff();
      double scale = std::max(1.0, simpson.cwiseAbs().maxCoeff());
      if (diff < rel_tol * scale) return sign * simpson;
    }
    simpson_prev = simpson;
    have_prev = true;
    trap = trap2;
    n *= 2;
    if (n > max_intervals)
      throw IntegrationError("Simpson refinement failed to converge", a);
  }
}

namespace {
// Nodes and weights for 5-point Gauss-Legendre on [-1, 1].
constexpr double kGx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double kGw[5] = {0.2369268850561891, 0.4786286704993665,
                           0.5688888888888889, 0.4786286704993665,
                           0.2369268850561891};
}  // namespace

Eigen::VectorXd gauss5(const VectorFn& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  Eigen::VectorXd acc = kGw[0] * checked_eval(f, c + h * kGx[0]);
  for (int i = 1; i < 5; ++i) acc += kGw[i] * checked_eval(f, c + h * kGx[i]);
  return h * acc;
}

Antiderivative::Antiderivative(VectorFn f, double lo, double hi,
                               const std::vector<double>& breakpoints,
                               int cells_per_piece)
    : f_(std::move(f)), lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw std::invalid_argument("Antiderivative: empty interval");
  std::vector<double> pieces{lo};
  for (double b : breakpoints)
    if (b > pieces.back() && b < hi) pieces.push_back(b);
  pieces.push_back(hi);

  nodes_.push_back(lo);
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
    for (int i = 1; i <= cells_per_piece; ++i)
      nodes_.push_back(pieces[p] +
                       (pieces[p + 1] - pieces[p]) * double(i) / double(cells_per_piece));
  }

  cumulative_.resize(nodes_.size());
  cumulative_[0] = Eigen::VectorXd::Zero(f_(lo).size());
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    cumulative_[i] = cumulative_[i - 1] + gauss5(f_, nodes_[i - 1], nodes_[i]);
}

Eigen::VectorXd Antiderivative::operator()(double t) const {
  if (t <= lo_) return Eigen::VectorXd::Zero(cumulative_[0].size());
  t = std::min(t, hi_);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  i = std::min(i, nodes_.size() - 2);
  return cumulative_[i] + gauss5(f_, nodes_[i], t);
}

}  // namespace prodint
