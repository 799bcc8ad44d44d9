#pragma once

#include <utility>
#include <vector>

#include "prodint/curve.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"

namespace prodint {

// Replayable outcome of a sampling probe: the worst case is recorded with the
// inputs that produced it.
struct ProbeReport {
  long samples = 0;
  long chart_exits = 0;
  double max_violation = 0.0;  // worst (lhs - rhs); <= 0 when the bound held everywhere
  double slack_tolerance = 0.0;
  std::vector<Eigen::VectorXd> witness;  // tuple of the worst case
  double witness_time = 0.0;             // grid point of the worst case, when a curve probe
  std::string candidate;                 // description of the candidate seminorm

  bool passed() const { return max_violation <= slack_tolerance; }
};

// Samples tuples X_1..X_n with n uniform in [1, n_max], directions uniform on
// the o-sphere, and Dirichlet-split magnitudes with sum o(X_i) = 1; checks
// (u o chart)(unchart(X_1) ... unchart(X_n)) <= sum o(X_i) + 1e-9. Products
// that leave the chart count as chart exits, not violations.
ProbeReport mu_convex_probe(const GroupPtr& G, const Seminorm& u, const Seminorm& o,
                            int n_max, long samples, unsigned long seed);

// Smallest multiplier c on a bisection grid of relative width 1e-2 such that
// the probe passes with o = c * u, with the sample set held fixed across c.
std::pair<double, ProbeReport> find_o(const GroupPtr& G, const Seminorm& u, int n_max,
                                      long samples, unsigned long seed,
                                      double c_hi_start = 4.0);

// Grid check of (p o chart)(evolution(t)) <= int_lo^t q(phi) + 1e-6 for
// curves scaled to have total q-integral at most 1.
ProbeReport continuity_bound_check(const GroupPtr& G, const Seminorm& p,
                                   const Seminorm& q, const std::vector<Curve>& phis,
                                   const EvolveConfig& cfg, int grid = 129);

// The reparameterization that equalizes the q-arclength onto [0, 2]: the
// substitute curve has sup-seminorm at most 1 and the same product integral.
struct L1ContinuityReport {
  double endpoint_distance = 0.0;
  double error_budget = 0.0;
  double substitute_sup = 0.0;  // sup of q along the reparameterized curve
  bool ok = false;
};
L1ContinuityReport l1_continuity_check(const GroupPtr& G, const Seminorm& q,
                                       const Curve& phi, const EvolveConfig& cfg);

// Worst slack of (1+e_1)...(1+e_n) - 1 <= 2 sum e_k over random tuples with
// sum e_k <= 1/2; nonpositive return means the inequality held on the sample.
double scalar_product_inequality_max_slack(long samples, int n_max, unsigned long seed);

}  // namespace prodint
