#include "prodint/lcvs.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "prodint/jet.hpp"

namespace prodint {

Eigen::VectorXd riemann_integral(const Curve& c, double a, double b, double rel_tol) {
  double lo = std::min(a, b), hi = std::max(a, b);
  if (lo < c.lo() - 1e-12 || hi > c.hi() + 1e-12)
    throw std::invalid_argument("riemann_integral: [a,b] not contained in the curve domain");
  return adaptive_simpson([&c](double t) { return c(t); }, a, b, rel_tol);
}

Eigen::VectorXd piecewise_integral(const PiecewiseCurve& pw, double rel_tol) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(pw.dim());
  for (std::size_t p = 0; p < pw.segment_count(); ++p)
    acc += riemann_integral(pw.segment(p), pw.segment(p).lo(), pw.segment(p).hi(), rel_tol);
  return acc;
}

GridSupremum ck_seminorm(const Curve& c, const Seminorm& p, int s, int grid) {
  if (s > c.order())
    throw std::invalid_argument("ck_seminorm: order exceeds the curve's declared order");
  GridSupremum out;
  out.grid_size = grid;
  for (int i = 0; i < grid; ++i) {
    double t = c.lo() + c.length() * double(i) / double(grid - 1);
    for (int m = 0; m <= s; ++m) out.value = std::max(out.value, p(c.eval(t, m)));
  }
  return out;
}

double l1_seminorm(const Curve& c, const Seminorm& p, double rel_tol) {
  auto scalar = [&](double t) {
    Eigen::VectorXd v(1);
    v(0) = p(c(t));
    return v;
  };
  return adaptive_simpson(scalar, c.lo(), c.hi(), rel_tol)(0);
}

double l1_seminorm(const PiecewiseCurve& pw, const Seminorm& p, double rel_tol) {
  double acc = 0.0;
  for (std::size_t q = 0; q < pw.segment_count(); ++q)
    acc += l1_seminorm(pw.segment(q), p, rel_tol);
  return acc;
}

PiecewiseCurve polygon_approx(const Curve& c, int n) {
  if (n < 1) throw std::invalid_argument("polygon_approx: need n >= 1");
  std::vector<double> bp(static_cast<std::size_t>(n) + 1);
  std::vector<Curve> segs;
  for (int i = 0; i <= n; ++i) bp[i] = c.lo() + c.length() * double(i) / double(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd va = c(bp[i]), vb = c(bp[i + 1]);
    double ta = bp[i], h = bp[i + 1] - bp[i];
    Eigen::VectorXd slope = (vb - va) / h;
    segs.push_back(Curve::polynomial({va - ta * slope, slope}, bp[i], bp[i + 1]));
  }
  return PiecewiseCurve(std::move(bp), std::move(segs));
}

namespace {

// b(x) = exp(-1/(1-x^2)) on (-1,1); all derivatives via truncated Taylor
// arithmetic so they vanish cleanly at the support boundary.
double bump_base(double x, int s) {
  if (std::abs(x) >= 1.0) return 0.0;
  if (s == 0) return std::exp(-1.0 / (1.0 - x * x));
  Jet t = Jet::variable(x, static_cast<std::size_t>(s));
  Jet g = exp(-1.0 / (1.0 - t * t));
  return g.derivative(static_cast<std::size_t>(s));
}

double bump_base_mass() {
  static const double mass = adaptive_simpson(
      [](double x) {
        Eigen::VectorXd v(1);
        v(0) = bump_base(x, 0);
        return v;
      },
      -1.0, 1.0)(0);
  return mass;
}

}  // namespace

Mollifier::Mollifier(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Mollifier: need n >= 1");
}

double Mollifier::eval(double t, int s) const {
  double scale = double(n_) / bump_base_mass();
  for (int k = 0; k < s; ++k) scale *= double(n_);
  return scale * bump_base(double(n_) * t, s);
}

namespace {

Curve convolve_impl(std::function<Eigen::VectorXd(double)> extended,
                    std::vector<double> kinks, int dim, double lo, double hi, int n) {
  auto moll = std::make_shared<Mollifier>(n);
  auto eval = [extended, kinks, moll, dim](double t, int s) {
    const double rad = moll->support_radius();
    // Integrate u -> rho^(s)(t - u) c(u) over [t - rad, t + rad], split at the
    // extension kinks so the quadrature only ever sees smooth pieces.
    std::vector<double> cuts{t - rad};
    for (double k : kinks)
      if (k > t - rad && k < t + rad) cuts.push_back(k);
    cuts.push_back(t + rad);
    std::sort(cuts.begin(), cuts.end());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i + 1] - cuts[i] < 1e-15) continue;
      acc += adaptive_simpson(
          [&](double u) { return (moll->eval(t - u, s) * extended(u)).eval(); },
          cuts[i], cuts[i + 1]);
    }
    return acc;
  };
  return Curve(lo, hi, dim, kOrderSmooth, eval);
}

}  // namespace

Curve convolve(const PiecewiseCurve& pw, int n) {
  double lo = pw.lo(), hi = pw.hi();
  auto extended = [pw, lo, hi](double u) {
    return pw(std::clamp(u, lo, hi));
  };
  std::vector<double> kinks = pw.breakpoints();
  return convolve_impl(extended, std::move(kinks), pw.dim(), lo, hi, n);
}

Curve convolve(const Curve& c, int n) {
  double lo = c.lo(), hi = c.hi();
  auto extended = [c, lo, hi](double u) { return c(std::clamp(u, lo, hi)); };
  return convolve_impl(extended, {lo, hi}, c.dim(), lo, hi, n);
}

Curve iterated_integrate(const std::vector<Eigen::VectorXd>& jets, const Curve& c) {
  if (jets.empty()) throw std::invalid_argument("iterated_integrate: need p >= 1");
  Curve acc = c;
  for (std::size_t k = 0; k < jets.size(); ++k) {
    // One antiderivative step: X + int_lo^t acc.
    auto cache = std::make_shared<Antiderivative>(
        [acc](double t) { return acc(t); }, acc.lo(), acc.hi());
    Eigen::VectorXd x0 = jets[k];
    Curve inner = acc;
    int order = inner.order() >= kOrderSmooth ? kOrderSmooth : inner.order() + 1;
    acc = Curve(inner.lo(), inner.hi(), inner.dim(), order,
                [cache, x0, inner](double t, int s) -> Eigen::VectorXd {
                  if (s == 0) return x0 + (*cache)(t);
                  return inner.eval(t, s - 1);
                });
  }
  return acc;
}

}  // namespace prodint
