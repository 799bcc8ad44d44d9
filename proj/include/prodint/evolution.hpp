#pragma once

#include <map>
#include <string>
#include <vector>

#include "prodint/curve.hpp"
#include "prodint/group.hpp"
#include "prodint/logderiv.hpp"

namespace prodint {

enum class Scheme { lie_euler, midpoint };
std::string scheme_name(Scheme s);
int scheme_order(Scheme s);

struct EvolveConfig {
  Scheme scheme = Scheme::midpoint;
  double step = 1e-3;           // actual step divides the interval evenly
  double target_tolerance = 0;  // when > 0, halve the step until the estimate fits
  long max_steps = 4'000'000;
};

// A product integral: the sampled solution of mu' = phi * mu, mu(lo) = e,
// stepped as mu_{k+1} = exp(h phi(t_k[+h/2])) mu_k (new factor on the left,
// matching the right logarithmic derivative). Always runs the requested step
// and its half; the half-step run is the reported curve and the difference
// feeds a single Richardson error estimate.
class EvolutionResult {
 public:
  const GroupPtr& group() const { return G_; }
  double lo() const { return ts_.front(); }
  double hi() const { return ts_.back(); }
  Scheme scheme() const { return scheme_; }
  double step() const { return step_; }

  const std::vector<double>& node_times() const { return ts_; }
  const std::vector<Elem>& node_values() const { return mus_; }

  Elem operator()(double t) const;
  Elem endpoint() const { return mus_.back(); }
  // Endpoint with the leading step-error term removed by Richardson
  // extrapolation of the coarse/fine pair.
  Elem endpoint_refined() const { return refined_; }

  // Chart-distance error estimate at the endpoint, total and per seminorm.
  double error_estimate() const { return est_; }
  const std::map<std::string, double>& error_by_seminorm() const { return est_sn_; }

  GroupCurve as_group_curve() const;

 private:
  friend EvolutionResult evolve(const GroupPtr&, const Curve&, const EvolveConfig&);
  friend EvolutionResult evolve_piecewise(const GroupPtr&, const PiecewiseCurve&,
                                          const EvolveConfig&);
  static EvolutionResult run(const GroupPtr& G,
                             std::function<Eigen::VectorXd(double)> phi,
                             const std::vector<double>& pieces, const EvolveConfig& cfg);
  GroupPtr G_;
  Scheme scheme_ = Scheme::midpoint;
  double step_ = 0.0;
  std::vector<double> ts_;
  std::vector<Elem> mus_;
  std::function<Eigen::VectorXd(double)> phi_;
  Elem refined_;
  double est_ = 0.0;
  std::map<std::string, double> est_sn_;
};

EvolutionResult evolve(const GroupPtr& G, const Curve& phi, const EvolveConfig& cfg);

// Segment-wise evolution composed right-to-left across the breakpoints.
EvolutionResult evolve_piecewise(const GroupPtr& G, const PiecewiseCurve& pw,
                                 const EvolveConfig& cfg);

// Sup over interior nodes of | D(mu)(t_k) - phi(t_k) | where D is the
// fourth-order difference derivative across scheme nodes; measures the local
// consistency order of the scheme.
double reconstruct_residual(const GroupPtr& G, const Curve& phi, const EvolveConfig& cfg);

struct IdentityResidual {
  double residual = 0.0;
  double error_budget = 0.0;  // sum of the participating error estimates
};

// Rule d): endpoint distance between one evolution and the composed segment
// product over the given interior breakpoints.
IdentityResidual concat_residual(const GroupPtr& G, const Curve& phi,
                                 const std::vector<double>& interior_breakpoints,
                                 const EvolveConfig& cfg);

// Time reversal phi_rev(t) = -phi(lo + hi - t).
Curve reverse(const Curve& phi);
// Chart distance of [evolve(reverse(phi))] * [evolve(phi)] from the identity.
IdentityResidual reverse_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const EvolveConfig& cfg);

// Rule e): endpoint distance between the evolution of phi and the evolution
// of rhodot * (phi o rho) for a monotone surjective reparameterization.
IdentityResidual substitution_check(const GroupPtr& G, const Curve& phi,
                                    const Curve& rho, const EvolveConfig& cfg);

// Rules a) to c); the transported integrands are built by Ad along the
// computed evolutions, and both sides are evolved independently.
IdentityResidual product_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const Curve& psi, const EvolveConfig& cfg,
                                           int grid = 33);
IdentityResidual quotient_identity_residual(const GroupPtr& G, const Curve& phi,
                                            const Curve& psi, const EvolveConfig& cfg,
                                            int grid = 33);
IdentityResidual inverse_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const EvolveConfig& cfg, int grid = 33);

// A registered C^1 homomorphism pair for rule f).
struct Homomorphism {
  std::string name;
  GroupPtr domain;
  GroupPtr codomain;
  std::function<Elem(const Elem&)> map;
  Eigen::MatrixXd tangent;  // d_e of the map in algebra coordinates
};
Homomorphism identity_homomorphism(const GroupPtr& G);
Homomorphism su2_so3_homomorphism();
Homomorphism line_to_torus_homomorphism(int d);

IdentityResidual hom_transport_residual(const Curve& phi, const Homomorphism& hom,
                                        const EvolveConfig& cfg, int grid = 33);

}  // namespace prodint
