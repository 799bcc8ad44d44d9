#include "prodint/smoothing.hpp"

#include <cmath>
#include <memory>

#include "prodint/jet.hpp"
#include "prodint/quadrature.hpp"

namespace prodint {

namespace {

// exp(-1/(4 t (1-t))): the standard bump carried to [0,1]. Its normalized
// peak is about 1.66, inside the required [0, 2] range.
double raw_bump(double t, int s) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  if (s == 0) return std::exp(-0.25 / (t * (1.0 - t)));
  Jet u = Jet::variable(t, static_cast<std::size_t>(s));
  Jet g = exp(-0.25 / (u * (1.0 - u)));
  return g.derivative(static_cast<std::size_t>(s));
}

}  // namespace

BumpProfile::BumpProfile() {
  c0_ = 1.0 / adaptive_simpson(
                  [](double t) {
                    Eigen::VectorXd v(1);
                    v(0) = raw_bump(t, 0);
                    return v;
                  },
                  0.0, 1.0, 1e-14)(0);
}

double BumpProfile::eval(double t, int s) const { return c0_ * raw_bump(t, s); }

Curve BumpProfile::as_curve() const {
  double c0 = c0_;
  return Curve(0, 1, 1, kOrderSmooth, [c0](double t, int s) {
    Eigen::VectorXd v(1);
    v(0) = c0 * raw_bump(t, s);
    return v;
  });
}

const BumpProfile& bump() {
  static const BumpProfile instance;
  return instance;
}

namespace {

// Antiderivative of the normalized bump on [0,1]; shared by every reparam.
double bump_antiderivative(double t) {
  static const Antiderivative cache(
      [](double u) {
        Eigen::VectorXd v(1);
        v(0) = bump().eval(u, 0);
        return v;
      },
      0.0, 1.0, {}, 2048);
  if (t <= 0) return 0.0;
  if (t >= 1) return 1.0;
  return cache(t)(0);
}

struct SegmentLookup {
  std::vector<double> bp;
  std::size_t find(double t) const {
    auto it = std::upper_bound(bp.begin(), bp.end(), t);
    std::size_t p = it == bp.begin() ? 0 : static_cast<std::size_t>(it - bp.begin()) - 1;
    return std::min(p, bp.size() - 2);
  }
};

}  // namespace

Curve reparam_profile(const std::vector<double>& breakpoints) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("reparam_profile: need at least one segment");
  auto lookup = std::make_shared<SegmentLookup>(SegmentLookup{breakpoints});
  double lo = breakpoints.front(), hi = breakpoints.back();
  return Curve(lo, hi, 1, kOrderSmooth, [lookup](double t, int s) {
    std::size_t p = lookup->find(t);
    double tp = lookup->bp[p], delta = lookup->bp[p + 1] - tp;
    double kappa = (t - tp) / delta;
    Eigen::VectorXd v(1);
    if (s == 0)
      v(0) = tp + delta * bump_antiderivative(kappa);
    else
      v(0) = bump().eval(kappa, s - 1) / std::pow(delta, s - 1);
    return v;
  });
}

Curve smooth_piecewise(const PiecewiseCurve& pw) {
  auto lookup = std::make_shared<SegmentLookup>(SegmentLookup{pw.breakpoints()});
  Curve rho = reparam_profile(pw.breakpoints());
  int order = pw.min_order() >= kOrderSmooth ? kOrderSmooth : pw.min_order();
  int d = pw.dim();
  return Curve(pw.lo(), pw.hi(), d, order,
               [lookup, rho, pw, d](double t, int s) -> Eigen::VectorXd {
                 std::size_t p = lookup->find(t);
                 const Curve& seg = pw.segment(p);
                 double u = std::clamp(rho(t)(0), seg.lo(), seg.hi());
                 if (s == 0) return rho.eval(t, 1)(0) * seg(u);
                 // Taylor arithmetic: jet of speed times jet of seg o rho.
                 auto nf = static_cast<std::size_t>(s);
                 Jet speed(0.0, nf), repar(0.0, nf);
                 double fact = 1.0;
                 for (int k = 0; k <= s; ++k) {
                   if (k >= 2) fact *= double(k);
                   speed.coeff(k) = rho.eval(t, k + 1)(0) / fact;
                   repar.coeff(k) = rho.eval(t, k)(0) / fact;
                 }
                 repar.coeff(0) = u;
                 Eigen::VectorXd out(d);
                 for (int i = 0; i < d; ++i) {
                   Jet comp(0.0, nf);
                   double f2 = 1.0;
                   for (int k = 0; k <= s; ++k) {
                     if (k >= 2) f2 *= double(k);
                     comp.coeff(k) = seg.eval(u, k)(i) / f2;
                   }
                   out(i) = (speed * compose(comp, repar)).derivative(nf);
                 }
                 return out;
               });
}

MackeySchedule MackeySchedule::from_elements(GroupPtr G, std::vector<Elem> elements) {
  if (elements.empty())
    throw std::invalid_argument("MackeySchedule: need at least one element");
  MackeySchedule s;
  s.group = std::move(G);
  s.g = std::move(elements);
  s.X.push_back(Eigen::VectorXd::Zero(s.group->dim()));
  s.Y.push_back(Eigen::VectorXd::Zero(s.group->dim()));
  for (std::size_t n = 1; n < s.g.size(); ++n) {
    Elem rel = s.group->mult(s.group->inv(s.g[n]), s.g[n - 1]);
    s.X.push_back(s.group->chart(rel));
    s.Y.push_back(std::pow(2.0, double(n + 1)) * s.X.back());
  }
  double t = 0.0;
  s.t.push_back(0.0);
  for (std::size_t n = 0; n <= s.g.size(); ++n) {
    t += std::pow(0.5, double(n + 1));
    s.t.push_back(t);
  }
  return s;
}

Curve mackey_glue(const MackeySchedule& seq, int N, double decay_c) {
  const GroupPtr& G = seq.group;
  if (N + 1 > static_cast<int>(seq.count()))
    throw std::invalid_argument("mackey_glue: schedule shorter than N");
  for (int n = 1; n <= N; ++n) {
    if (seq.X[n].norm() > decay_c * std::pow(2.0, -double(n) * double(n)))
      throw std::invalid_argument(
          "mackey_glue: increment decay violated first at n = " + std::to_string(n));
  }
  if (!G->chart_is_exp())
    throw std::invalid_argument(
        "mackey_glue: requires a chart that inverts the exponential");

  // On [t_n, t_{n+1}] the chart ray through Y_n is a one-parameter subgroup,
  // so the glued curve is just bump-speed times Y_n; zero beyond t_{N+1}.
  auto data = std::make_shared<MackeySchedule>(seq);
  int d = G->dim();
  return Curve(0.0, 1.0, d, kOrderSmooth, [data, N, d](double t, int s) {
    auto it = std::upper_bound(data->t.begin(), data->t.end(), t);
    long n = it == data->t.begin() ? 0 : (it - data->t.begin()) - 1;
    if (n > N || t >= data->t[N + 1]) return Eigen::VectorXd::Zero(d).eval();
    double delta = data->t[n + 1] - data->t[n];
    double kappa = (t - data->t[n]) / delta;
    double speed = bump().eval(kappa, s) / std::pow(delta, s);
    return (speed * data->Y[n]).eval();
  });
}

}  // namespace prodint
