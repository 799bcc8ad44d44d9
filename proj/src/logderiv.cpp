#include "prodint/logderiv.hpp"

#include <cmath>

#include "prodint/parallel.hpp"

namespace prodint {

GroupCurve::GroupCurve(GroupPtr G, double lo, double hi, int order, EvalFn eval,
                       EvalFn ambient_derivative)
    : G_(std::move(G)),
      lo_(lo),
      hi_(hi),
      order_(order),
      eval_(std::move(eval)),
      deriv_(std::move(ambient_derivative)) {
  if (!(lo < hi)) throw std::invalid_argument("GroupCurve: empty interval");
}

GroupCurve GroupCurve::constant(GroupPtr G, const Elem& g, double lo, double hi) {
  Elem zero = Elem::Zero(g.rows(), g.cols());
  return GroupCurve(
      std::move(G), lo, hi, kOrderSmooth, [g](double) { return g; },
      [zero](double) { return zero; });
}

GroupCurve GroupCurve::one_parameter(GroupPtr G, const Eigen::VectorXd& X,
                                     const Curve& f) {
  if (f.dim() != 1) throw std::invalid_argument("one_parameter: f must be scalar");
  const Group* Gp = G.get();
  return GroupCurve(
      G, f.lo(), f.hi(), f.order(),
      [Gp, X, f](double t) { return Gp->exp((f(t)(0) * X).eval()); },
      [Gp, X, f](double t) {
        return Gp->one_param_derivative(X, f(t)(0), f.eval(t, 1)(0));
      });
}

Elem GroupCurve::ambient_derivative(double t) const {
  if (deriv_) return deriv_(t);
  double h = 1e-6 * length();
  return fd4_derivative([this](double u) { return eval_(u); }, t, h, lo_, hi_);
}

GroupCurve GroupCurve::mult(const GroupCurve& other) const {
  const Group* Gp = G_.get();
  auto a = eval_, b = other.eval_;
  EvalFn deriv = nullptr;
  if (deriv_ && other.deriv_) {
    auto da = deriv_, db = other.deriv_;
    deriv = [Gp, a, b, da, db](double t) {
      return Gp->product_derivative(a(t), da(t), b(t), db(t));
    };
  }
  return GroupCurve(G_, std::max(lo_, other.lo_), std::min(hi_, other.hi_),
                    std::min(order_, other.order_),
                    [Gp, a, b](double t) { return Gp->mult(a(t), b(t)); }, deriv);
}

GroupCurve GroupCurve::inverse() const {
  const Group* Gp = G_.get();
  auto a = eval_;
  EvalFn deriv = nullptr;
  if (deriv_) {
    auto da = deriv_;
    deriv = [Gp, a, da](double t) { return Gp->inverse_derivative(a(t), da(t)); };
  }
  return GroupCurve(G_, lo_, hi_, order_,
                    [Gp, a](double t) { return Gp->inv(a(t)); }, deriv);
}

GroupCurve GroupCurve::right_translated(const Elem& g) const {
  const Group* Gp = G_.get();
  auto a = eval_;
  EvalFn deriv = nullptr;
  if (deriv_) {
    auto da = deriv_;
    Elem zero = Elem::Zero(g.rows(), g.cols());
    deriv = [Gp, a, da, g, zero](double t) {
      return Gp->product_derivative(a(t), da(t), g, zero);
    };
  }
  return GroupCurve(G_, lo_, hi_, order_,
                    [Gp, a, g](double t) { return Gp->mult(a(t), g); }, deriv);
}

GroupCurve GroupCurve::composed_with(const Curve& rho) const {
  if (rho.dim() != 1)
    throw std::invalid_argument("composed_with: reparameterization must be scalar");
  auto a = eval_;
  EvalFn deriv = nullptr;
  if (deriv_) {
    auto da = deriv_;
    deriv = [a, da, rho](double t) {
      return (rho.eval(t, 1)(0) * da(rho(t)(0))).eval();
    };
  }
  return GroupCurve(G_, rho.lo(), rho.hi(), std::min(order_, rho.order()),
                    [a, rho](double t) { return a(rho(t)(0)); }, deriv);
}

Curve der(const GroupCurve& mu) {
  GroupPtr G = mu.group();
  int d = G->dim();
  int order = std::max(0, mu.order() == kOrderSmooth ? kOrderSmooth : mu.order() - 1);
  double lo = mu.lo(), hi = mu.hi();

  auto base = [G, mu](double t) -> Eigen::VectorXd {
    try {
      if (mu.has_analytic_derivative())
        return G->der_from_ambient(mu(t), mu.ambient_derivative(t));
      // Difference quotients of s -> log(mu(t+s) mu(t)^-1), which stays at the
      // identity, so the chart branch is never in doubt.
      Elem inv_here = G->inv(mu(t));
      double h = 1e-4 * mu.length();
      return fd4_derivative(
          [&](double s) { return G->log(G->mult(mu(s), inv_here)); }, t, h, mu.lo(),
          mu.hi());
    } catch (const SingularElementError& e) {
      throw SingularElementError(std::string(e.what()) + " at t = " + std::to_string(t));
    }
  };

  // Higher derivative requests fall back to nested differences of the order
  // below; they only serve seminorm probes of der outputs.
  struct Evaluator {
    std::function<Eigen::VectorXd(double)> base;
    double lo, hi;
    Eigen::VectorXd eval(double t, int s) const {
      if (s == 0) return base(t);
      double h = 5e-3 * (hi - lo);
      return fd4_derivative([this, s](double u) { return eval(u, s - 1); }, t, h, lo, hi);
    }
  };
  auto ev = std::make_shared<Evaluator>(Evaluator{base, lo, hi});
  return Curve(lo, hi, d, order,
               [ev](double t, int s) { return ev->eval(t, s); });
}

namespace {

double grid_sup(double lo, double hi, int grid,
                const std::function<double(double)>& f) {
  return par::max_reduce(grid, [&](long i) {
    double t = lo + (hi - lo) * double(i) / double(grid - 1);
    return f(t);
  });
}

}  // namespace

double product_rule_residual(const GroupCurve& mu, const GroupCurve& nu, int grid) {
  GroupPtr G = mu.group();
  Curve dmu = der(mu), dnu = der(nu);
  GroupCurve prod = mu.mult(nu);
  Curve dprod = der(prod);
  return grid_sup(prod.lo(), prod.hi(), grid, [&](double t) {
    Eigen::VectorXd lhs = dprod(t);
    Eigen::VectorXd rhs = dmu(t) + G->Ad(mu(t), dnu(t));
    return (lhs - rhs).norm();
  });
}

double inverse_rule_residual(const GroupCurve& mu, int grid) {
  GroupPtr G = mu.group();
  Curve dmu = der(mu);
  GroupCurve inv = mu.inverse();
  Curve dinv = der(inv);
  return grid_sup(mu.lo(), mu.hi(), grid, [&](double t) {
    Eigen::VectorXd lhs = dinv(t);
    Eigen::VectorXd rhs = -G->Ad(G->inv(mu(t)), dmu(t));
    return (lhs - rhs).norm();
  });
}

double quotient_rule_residual(const GroupCurve& mu, const GroupCurve& nu, int grid) {
  GroupPtr G = mu.group();
  Curve dmu = der(mu), dnu = der(nu);
  GroupCurve quot = mu.inverse().mult(nu);
  Curve dquot = der(quot);
  return grid_sup(quot.lo(), quot.hi(), grid, [&](double t) {
    Eigen::VectorXd lhs = dquot(t);
    Eigen::VectorXd rhs = G->Ad(G->inv(mu(t)), (dnu(t) - dmu(t)).eval());
    return (lhs - rhs).norm();
  });
}

double substitution_rule_residual(const GroupCurve& mu, const Curve& rho, int grid) {
  Curve dmu = der(mu);
  GroupCurve reparam = mu.composed_with(rho);
  Curve drep = der(reparam);
  return grid_sup(rho.lo(), rho.hi(), grid, [&](double t) {
    Eigen::VectorXd lhs = drep(t);
    Eigen::VectorXd rhs = rho.eval(t, 1)(0) * dmu(rho(t)(0));
    return (lhs - rhs).norm();
  });
}

}  // namespace prodint
