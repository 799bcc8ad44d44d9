#include "prodint/curve.hpp"

#include <algorithm>
#include <cmath>

#include "prodint/jet.hpp"

namespace prodint {

Curve::Curve(double lo, double hi, int dim, int order, EvalFn eval)
    : lo_(lo), hi_(hi), dim_(dim), order_(order), eval_(std::move(eval)) {
  if (!(lo < hi)) throw std::invalid_argument("Curve: empty interval");
  if (dim <= 0) throw std::invalid_argument("Curve: dimension must be positive");
}

Eigen::VectorXd Curve::eval(double t, int s) const {
  if (s < 0 || s > order_)
    throw std::invalid_argument("Curve: derivative order " + std::to_string(s) +
                                " exceeds declared order");
  return eval_(t, s);
}

Curve Curve::constant(const Eigen::VectorXd& value, double lo, double hi) {
  int d = static_cast<int>(value.size());
  return Curve(lo, hi, d, kOrderSmooth, [value, d](double, int s) {
    return s == 0 ? value : Eigen::VectorXd::Zero(d).eval();
  });
}

Curve Curve::zero(int dim, double lo, double hi) {
  return constant(Eigen::VectorXd::Zero(dim), lo, hi);
}

Curve Curve::polynomial(std::vector<Eigen::VectorXd> coeffs, double lo, double hi) {
  if (coeffs.empty()) throw std::invalid_argument("polynomial: no coefficients");
  int d = static_cast<int>(coeffs[0].size());
  return Curve(lo, hi, d, kOrderSmooth, [coeffs, d](double t, int s) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    // Horner on the s-th derivative.
    for (std::size_t k = coeffs.size(); k-- > static_cast<std::size_t>(s);) {
      double fall = 1.0;
      for (int j = 0; j < s; ++j) fall *= double(k - j);
      acc = acc * t + fall * coeffs[k];
    }
    return acc;
  });
}

Curve Curve::fourier(Eigen::VectorXd c0,
                     std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> harmonics,
                     double lo, double hi) {
  int d = static_cast<int>(c0.size());
  double w = 2.0 * M_PI / (hi - lo);
  return Curve(lo, hi, d, kOrderSmooth, [c0, harmonics, w, d](double t, int s) {
    Eigen::VectorXd acc = s == 0 ? c0 : Eigen::VectorXd::Zero(d).eval();
    for (std::size_t j = 1; j <= harmonics.size(); ++j) {
      double a = double(j) * w;
      double scale = std::pow(a, s);
      double phase = a * t + 0.5 * M_PI * double(s);
      acc += scale * (std::cos(phase) * harmonics[j - 1].first +
                      std::sin(phase) * harmonics[j - 1].second);
    }
    return acc;
  });
}

Curve Curve::linear_nodes(std::vector<Eigen::VectorXd> values, double lo, double hi) {
  if (values.size() < 2) throw std::invalid_argument("linear_nodes: need >= 2 nodes");
  int d = static_cast<int>(values[0].size());
  std::size_t n = values.size() - 1;
  return Curve(lo, hi, d, 1, [values, n, lo, hi, d](double t, int s) {
    double u = (t - lo) / (hi - lo) * double(n);
    std::size_t p = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(u))), n - 1);
    double h = (hi - lo) / double(n);
    if (s == 0) {
      double frac = u - double(p);
      return (values[p] + frac * (values[p + 1] - values[p])).eval();
    }
    return ((values[p + 1] - values[p]) / h).eval();
  });
}

Curve Curve::scaled(double c) const {
  auto base = eval_;
  return Curve(lo_, hi_, dim_, order_,
               [base, c](double t, int s) { return (c * base(t, s)).eval(); });
}

Curve Curve::plus(const Curve& other) const {
  if (other.dim() != dim_) throw std::invalid_argument("plus: dimension mismatch");
  auto a = eval_;
  auto b = other.eval_;
  return Curve(std::max(lo_, other.lo_), std::min(hi_, other.hi_), dim_,
               std::min(order_, other.order_),
               [a, b](double t, int s) { return (a(t, s) + b(t, s)).eval(); });
}

Curve Curve::restricted(double a, double b) const {
  if (a < lo_ || b > hi_ || !(a < b))
    throw std::invalid_argument("restricted: not a subinterval");
  auto base = eval_;
  return Curve(a, b, dim_, order_, base);
}

Curve Curve::scalar_mult(const Curve& f) const {
  if (f.dim() != 1) throw std::invalid_argument("scalar_mult: factor must be scalar");
  auto a = eval_;
  auto g = f.eval_;
  int ord = std::min(order_, f.order());
  int d = dim_;
  return Curve(lo_, hi_, d, ord, [a, g, d](double t, int s) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    double binom = 1.0;
    for (int k = 0; k <= s; ++k) {
      acc += binom * g(t, k)(0) * a(t, s - k);
      binom = binom * double(s - k) / double(k + 1);
    }
    return acc;
  });
}

Curve Curve::composed_with(const Curve& rho) const {
  if (rho.dim() != 1) throw std::invalid_argument("composed_with: reparam must be scalar");
  auto a = eval_;
  auto r = rho.eval_;
  int ord = std::min(order_, rho.order());
  int d = dim_;
  return Curve(rho.lo(), rho.hi(), d, ord, [a, r, d](double t, int s) -> Eigen::VectorXd {
    double u = r(t, 0)(0);
    if (s == 0) return a(u, 0);
    // Taylor composition per component.
    Jet rj(u, static_cast<std::size_t>(s));
    for (int k = 1; k <= s; ++k) {
      double fact = 1.0;
      for (int j = 2; j <= k; ++j) fact *= double(j);
      rj.coeff(static_cast<std::size_t>(k)) = r(t, k)(0) / fact;
    }
    Eigen::VectorXd out(d);
    for (int i = 0; i < d; ++i) {
      Jet fj(0.0, static_cast<std::size_t>(s));
      for (int k = 0; k <= s; ++k) {
        double fact = 1.0;
        for (int j = 2; j <= k; ++j) fact *= double(j);
        fj.coeff(static_cast<std::size_t>(k)) = a(u, k)(i) / fact;
      }
      out(i) = compose(fj, rj).derivative(static_cast<std::size_t>(s));
    }
    return out;
  });
}

PiecewiseCurve::PiecewiseCurve(std::vector<double> breakpoints, std::vector<Curve> segments)
    : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
  if (breakpoints_.size() < 2 || segments_.size() + 1 != breakpoints_.size())
    throw std::invalid_argument("PiecewiseCurve: breakpoint/segment count mismatch");
  const double scale = std::abs(breakpoints_.back() - breakpoints_.front());
  for (std::size_t p = 0; p + 1 < breakpoints_.size(); ++p) {
    if (!(breakpoints_[p] < breakpoints_[p + 1]))
      throw std::invalid_argument("PiecewiseCurve: breakpoints must increase");
    if (std::abs(segments_[p].lo() - breakpoints_[p]) > 1e-12 * scale ||
        std::abs(segments_[p].hi() - breakpoints_[p + 1]) > 1e-12 * scale)
      throw std::invalid_argument("PiecewiseCurve: segments must tile the breakpoints");
    if (segments_[p].dim() != segments_[0].dim())
      throw std::invalid_argument("PiecewiseCurve: dimension mismatch");
  }
}

PiecewiseCurve PiecewiseCurve::single(const Curve& c) {
  return PiecewiseCurve({c.lo(), c.hi()}, {c});
}

PiecewiseCurve PiecewiseCurve::step(std::vector<double> breakpoints,
                                    std::vector<Eigen::VectorXd> values) {
  std::vector<Curve> segs;
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p)
    segs.push_back(Curve::constant(values[p], breakpoints[p], breakpoints[p + 1]));
  return PiecewiseCurve(std::move(breakpoints), std::move(segs));
}

int PiecewiseCurve::min_order() const {
  int m = segments_[0].order();
  for (const auto& s : segments_) m = std::min(m, s.order());
  return m;
}

std::size_t PiecewiseCurve::segment_index(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  std::size_t p = static_cast<std::size_t>(it - breakpoints_.begin());
  if (p == 0) return 0;
  return std::min(p - 1, segments_.size() - 1);
}

Eigen::VectorXd PiecewiseCurve::operator()(double t) const { return eval(t, 0); }

Eigen::VectorXd PiecewiseCurve::eval(double t, int s) const {
  return segments_[segment_index(t)].eval(t, s);
}

PiecewiseCurve PiecewiseCurve::refined_at(double t) const {
  std::size_t p = segment_index(t);
  if (t <= breakpoints_[p] || t >= breakpoints_[p + 1]) return *this;
  std::vector<double> bp = breakpoints_;
  std::vector<Curve> segs = segments_;
  bp.insert(bp.begin() + static_cast<long>(p) + 1, t);
  Curve left = segments_[p].restricted(breakpoints_[p], t);
  Curve right = segments_[p].restricted(t, breakpoints_[p + 1]);
  segs[p] = left;
  segs.insert(segs.begin() + static_cast<long>(p) + 1, right);
  return PiecewiseCurve(std::move(bp), std::move(segs));
}

Eigen::VectorXd fd4_derivative(const std::function<Eigen::VectorXd(double)>& f,
                               double t, double h, double lo, double hi) {
  if (t - 2 * h >= lo && t + 2 * h <= hi) {
    return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h);
  }
  if (t + 4 * h <= hi) {
    return (-25.0 * f(t) + 48.0 * f(t + h) - 36.0 * f(t + 2 * h) + 16.0 * f(t + 3 * h) -
            3.0 * f(t + 4 * h)) /
           (12.0 * h);
  }
  return (25.0 * f(t) - 48.0 * f(t - h) + 36.0 * f(t - 2 * h) - 16.0 * f(t - 3 * h) +
          3.0 * f(t - 4 * h)) /
         (12.0 * h);
}

double derivative_consistency_residual(const Curve& c, int s, int samples) {
  const double h = 1e-3 * c.length();
  double worst = 0.0;
  for (int i = 1; i + 1 < samples; ++i) {
    double t = c.lo() + c.length() * double(i) / double(samples - 1);
    Eigen::VectorXd fd =
        fd4_derivative([&](double u) { return c.eval(u, s); }, t, h, c.lo(), c.hi());
    worst = std::max(worst, (fd - c.eval(t, s + 1)).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace prodint
