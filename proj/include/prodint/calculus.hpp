#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prodint/curve.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"

namespace prodint {

// Central-difference steps used by every derivative comparison here, refined
// by Richardson extrapolation.
inline const std::vector<double> kFdSteps{1e-2, 5e-3, 2.5e-3};

struct DerivativeComparison {
  Eigen::VectorXd numeric;   // extrapolated difference quotient
  Eigen::VectorXd formula;   // closed-form side
  double gap = 0.0;          // euclidean distance
  std::map<std::string, double> gap_by_seminorm;
  std::vector<double> fd_steps;  // raw per-step data for order measurements
  std::vector<double> fd_gaps;
};

// d/dh at 0 of evolve(h phi), compared against the integral of phi. The
// quotient chart(evolve(h phi))/h is extrapolated over h = 2^-3 .. 2^-10.
DerivativeComparison directional_derivative_at_zero(const GroupPtr& G, const Curve& phi,
                                                    const EvolveConfig& cfg);

// A parameter-dependent family (x, t) -> Phi(x, t) with t-derivatives up to
// t_order, an optional declared x-derivative, and optional declared local
// Lipschitz bounds per (seminorm, derivative order).
class ParamFamily {
 public:
  using EvalFn = std::function<Eigen::VectorXd(double x, double t, int s)>;

  ParamFamily(double x_lo, double x_hi, double t_lo, double t_hi, int dim, int t_order,
              EvalFn eval, EvalFn dx = nullptr);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }
  int dim() const { return dim_; }
  int t_order() const { return t_order_; }
  bool has_declared_dx() const { return static_cast<bool>(dx_); }

  Curve slice(double x) const;     // Phi(x, .)
  Curve dx_slice(double x) const;  // declared, or a central difference in x

  void declare_lipschitz(const std::string& seminorm, int order, double bound);
  std::optional<double> declared_lipschitz(const std::string& seminorm, int order) const;

 private:
  double x_lo_, x_hi_, t_lo_, t_hi_;
  int dim_, t_order_;
  EvalFn eval_, dx_;
  std::map<std::pair<std::string, int>, double> lipschitz_;
};

struct HypothesisCheck {
  std::string seminorm;
  int order = 0;
  bool declared = false;  // false: the bound below was estimated from samples
  double bound = 0.0;
  double worst_quotient = 0.0;
  double worst_h = 0.0;
  bool ok = true;
};

class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Difference-quotient seminorm boundedness of the family at x, sampled over a
// logarithmic h-grid; violations of declared bounds throw HypothesisError
// naming the seminorm, order, and step.
std::vector<HypothesisCheck> check_param_hypotheses(const ParamFamily& fam, double x,
                                                    const VectorSpec& algebra,
                                                    int max_order = 1);

struct ParamDerivativeResult : DerivativeComparison {
  std::vector<HypothesisCheck> hypotheses;
};

// d/dh at 0 of chart([evolve(Phi(x,.))]^-1 evolve(Phi(x+h,.))) against the
// integral of the Ad-transported partial derivative.
ParamDerivativeResult param_derivative(const GroupPtr& G, const ParamFamily& fam,
                                       double x, const EvolveConfig& cfg,
                                       int hypothesis_order = 1);

// The derivative of the evolution endpoint along psi at base point phi, in
// left-trivialized tangent coordinates, cross-checked against the difference
// quotient of h -> evolve(phi + h psi).
DerivativeComparison evol_differential(const GroupPtr& G, const Curve& phi,
                                       const Curve& psi, const EvolveConfig& cfg);

struct DuhamelResult {
  Eigen::VectorXd lhs;           // pulled-back difference quotient of exp(X(x))
  Eigen::VectorXd rhs_integral;  // int_0^1 Ad(exp(-s X), dX) ds
  Eigen::VectorXd rhs_closed;    // dexp series
  double gap_integral = 0.0;     // relative gaps against the lhs
  double gap_closed = 0.0;
  double gap_between = 0.0;      // the two right-hand forms against each other
};

// X is a path in the algebra parameterized by x (order >= 1 in x).
DuhamelResult duhamel(const GroupPtr& G, const Curve& X_of_x, double x);

}  // namespace prodint
