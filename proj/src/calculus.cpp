#include "prodint/calculus.hpp"

#include <cmath>

#include "prodint/adjoint.hpp"
#include "prodint/lcvs.hpp"

namespace prodint {

namespace {

// Richardson table for a quantity with an error expansion in integer powers
// of h, sampled at h, h/2, h/4, ...
Eigen::VectorXd richardson(const std::vector<Eigen::VectorXd>& values, int first_order) {
  std::vector<Eigen::VectorXd> row = values;
  for (std::size_t j = 1; j < values.size(); ++j) {
    double factor = std::pow(2.0, double(first_order + j - 1));
    for (std::size_t i = 0; i + j < values.size(); ++i)
      row[i] = (factor * row[i + 1] - row[i]) / (factor - 1.0);
  }
  return row[0];
}

// Composite per-cell Simpson over the evolution's node grid.
Eigen::VectorXd integrate_cells(const std::vector<double>& ts,
                                const std::function<Eigen::VectorXd(double)>& f) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(f(ts.front()).size());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    double a = ts[k], b = ts[k + 1];
    acc += (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
  }
  return acc;
}

}  // namespace

DerivativeComparison directional_derivative_at_zero(const GroupPtr& G, const Curve& phi,
                                                    const EvolveConfig& cfg) {
  DerivativeComparison out;
  std::vector<Eigen::VectorXd> quotients;
  for (int k = 3; k <= 10; ++k) {
    double h = std::pow(2.0, -k);
    EvolutionResult ev = evolve(G, phi.scaled(h), cfg);
    Elem end = ev.endpoint_refined();
    if (!G->in_chart(end))
      throw OutOfChartError("directional_derivative_at_zero: endpoint left the chart");
    quotients.push_back((G->chart(end) / h).eval());
    out.fd_steps.push_back(h);
  }
  out.numeric = richardson(quotients, 1);
  out.formula = riemann_integral(phi);
  out.gap = (out.numeric - out.formula).norm();
  for (const auto& sn : G->algebra().seminorms())
    out.gap_by_seminorm[sn.name] = sn((out.numeric - out.formula).eval());
  for (std::size_t i = 0; i < quotients.size(); ++i)
    out.fd_gaps.push_back((quotients[i] - out.formula).norm());
  return out;
}

ParamFamily::ParamFamily(double x_lo, double x_hi, double t_lo, double t_hi, int dim,
                         int t_order, EvalFn eval, EvalFn dx)
    : x_lo_(x_lo),
      x_hi_(x_hi),
      t_lo_(t_lo),
      t_hi_(t_hi),
      dim_(dim),
      t_order_(t_order),
      eval_(std::move(eval)),
      dx_(std::move(dx)) {
  if (!(x_lo < x_hi) || !(t_lo < t_hi))
    throw std::invalid_argument("ParamFamily: empty parameter or time interval");
}

Curve ParamFamily::slice(double x) const {
  auto e = eval_;
  return Curve(t_lo_, t_hi_, dim_, t_order_,
               [e, x](double t, int s) { return e(x, t, s); });
}

Curve ParamFamily::dx_slice(double x) const {
  if (dx_) {
    auto d = dx_;
    return Curve(t_lo_, t_hi_, dim_, t_order_,
                 [d, x](double t, int s) { return d(x, t, s); });
  }
  auto e = eval_;
  double h = 1e-6 * std::max(1.0, std::abs(x));
  return Curve(t_lo_, t_hi_, dim_, t_order_, [e, x, h](double t, int s) {
    return ((e(x + h, t, s) - e(x - h, t, s)) / (2.0 * h)).eval();
  });
}

void ParamFamily::declare_lipschitz(const std::string& seminorm, int order, double bound) {
  lipschitz_[{seminorm, order}] = bound;
}

std::optional<double> ParamFamily::declared_lipschitz(const std::string& seminorm,
                                                      int order) const {
  auto it = lipschitz_.find({seminorm, order});
  if (it == lipschitz_.end()) return std::nullopt;
  return it->second;
}

std::vector<HypothesisCheck> check_param_hypotheses(const ParamFamily& fam, double x,
                                                    const VectorSpec& algebra,
                                                    int max_order) {
  std::vector<HypothesisCheck> checks;
  max_order = std::min(max_order, fam.t_order());
  const int grid = 65;
  for (const auto& sn : algebra.seminorms()) {
    for (int s = 0; s <= max_order; ++s) {
      HypothesisCheck c;
      c.seminorm = sn.name;
      c.order = s;
      auto declared = fam.declared_lipschitz(sn.name, s);
      c.declared = declared.has_value();
      for (double h : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4}) {
        if (x + h > fam.x_hi() || x - h < fam.x_lo()) continue;
        double sup = 0.0;
        for (int i = 0; i < grid; ++i) {
          double t = fam.t_lo() + (fam.t_hi() - fam.t_lo()) * double(i) / double(grid - 1);
          for (int m = 0; m <= s; ++m) {
            Eigen::VectorXd diff = fam.slice(x + h).eval(t, m) - fam.slice(x).eval(t, m);
            sup = std::max(sup, sn(diff) / h);
          }
        }
        if (sup > c.worst_quotient) {
          c.worst_quotient = sup;
          c.worst_h = h;
        }
      }
      c.bound = c.declared ? *declared : c.worst_quotient;
      c.ok = c.worst_quotient <= c.bound * (1.0 + 1e-9) + 1e-12;
      if (c.declared && !c.ok)
        throw HypothesisError("difference-quotient bound violated for seminorm '" +
                              c.seminorm + "', order " + std::to_string(c.order) +
                              ", h = " + std::to_string(c.worst_h));
      checks.push_back(std::move(c));
    }
  }
  return checks;
}

namespace {

// int Ad_{[evolution(s)]^-1}(chi(s)) ds over the evolution's node cells.
Eigen::VectorXd transported_integral(const GroupPtr& G, const EvolutionResult& ev,
                                     const Curve& chi) {
  return integrate_cells(ev.node_times(), [&](double t) {
    return G->Ad(G->inv(ev(t)), chi(t));
  });
}

}  // namespace

ParamDerivativeResult param_derivative(const GroupPtr& G, const ParamFamily& fam,
                                       double x, const EvolveConfig& cfg,
                                       int hypothesis_order) {
  if (!fam.has_declared_dx())
    throw HypothesisError("param_derivative: the family must declare its x-derivative");
  ParamDerivativeResult out;
  out.hypotheses = check_param_hypotheses(fam, x, G->algebra(), hypothesis_order);

  EvolutionResult base = evolve(G, fam.slice(x), cfg);
  Elem base_inv = G->inv(base.endpoint_refined());

  std::vector<Eigen::VectorXd> centrals;
  for (double h : kFdSteps) {
    auto pulled = [&](double xx) {
      EvolutionResult e = evolve(G, fam.slice(xx), cfg);
      return G->chart(G->mult(base_inv, e.endpoint_refined()));
    };
    centrals.push_back(((pulled(x + h) - pulled(x - h)) / (2.0 * h)).eval());
    out.fd_steps.push_back(h);
  }
  out.numeric = richardson(centrals, 2);

  out.formula = transported_integral(G, base, fam.dx_slice(x));
  out.gap = (out.numeric - out.formula).norm();
  for (const auto& sn : G->algebra().seminorms())
    out.gap_by_seminorm[sn.name] = sn((out.numeric - out.formula).eval());
  for (const auto& c : centrals) out.fd_gaps.push_back((c - out.formula).norm());
  return out;
}

DerivativeComparison evol_differential(const GroupPtr& G, const Curve& phi,
                                       const Curve& psi, const EvolveConfig& cfg) {
  DerivativeComparison out;
  EvolutionResult base = evolve(G, phi, cfg);
  out.formula = transported_integral(G, base, psi);

  Elem base_inv = G->inv(base.endpoint_refined());
  std::vector<Eigen::VectorXd> centrals;
  for (double h : kFdSteps) {
    auto pulled = [&](double hh) {
      EvolutionResult e = evolve(G, phi.plus(psi.scaled(hh)), cfg);
      return G->chart(G->mult(base_inv, e.endpoint_refined()));
    };
    centrals.push_back(((pulled(h) - pulled(-h)) / (2.0 * h)).eval());
    out.fd_steps.push_back(h);
  }
  out.numeric = richardson(centrals, 2);
  out.gap = (out.numeric - out.formula).norm();
  for (const auto& sn : G->algebra().seminorms())
    out.gap_by_seminorm[sn.name] = sn((out.numeric - out.formula).eval());
  for (const auto& c : centrals) out.fd_gaps.push_back((c - out.formula).norm());
  return out;
}

DuhamelResult duhamel(const GroupPtr& G, const Curve& X_of_x, double x) {
  if (X_of_x.order() < 1)
    throw std::invalid_argument("duhamel: the path must be differentiable in x");
  DuhamelResult out;
  Eigen::VectorXd X = X_of_x(x);
  Eigen::VectorXd dX = X_of_x.eval(x, 1);
  Elem base_inv = G->inv(G->exp(X));

  std::vector<Eigen::VectorXd> centrals;
  for (double h : kFdSteps) {
    auto pulled = [&](double xx) {
      Elem rel = G->mult(base_inv, G->exp(X_of_x(xx)));
      if (!G->in_chart(rel))
        throw OutOfChartError("duhamel: pullback left the chart");
      return G->chart(rel);
    };
    centrals.push_back(((pulled(x + h) - pulled(x - h)) / (2.0 * h)).eval());
  }
  out.lhs = richardson(centrals, 2);

  Curve integrand(0, 1, G->dim(), 0, [&G, X, dX](double s, int) {
    return G->Ad(G->exp((-s * X).eval()), dX);
  });
  out.rhs_integral = riemann_integral(integrand, 0, 1);
  out.rhs_closed = dexp_factor(*G, X, dX).value;

  double scale = std::max(1.0, out.lhs.norm());
  out.gap_integral = (out.lhs - out.rhs_integral).norm() / scale;
  out.gap_closed = (out.lhs - out.rhs_closed).norm() / scale;
  out.gap_between = (out.rhs_integral - out.rhs_closed).norm() / scale;
  return out;
}

}  // namespace prodint
