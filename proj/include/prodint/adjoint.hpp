#pragma once

#include <vector>

#include "prodint/curve.hpp"
#include "prodint/evolution.hpp"
#include "prodint/group.hpp"

namespace prodint {

struct AdSeriesResult {
  Eigen::VectorXd value;
  int terms_used = 0;
  double truncation_bound = 0.0;  // norm of the first neglected term
  bool nilpotent_exact = false;   // the series terminated with an exactly zero term
};

// sum_n t^n/n! ad_X^n(Y), truncated at relative size 1e-16 with a 200-term
// cap; terminates exactly on nilpotent algebras.
AdSeriesResult ad_series(const Group& G, const Eigen::VectorXd& X,
                         const Eigen::VectorXd& Y, double t);

// sum_n 1/(n+1)! (-ad_X)^n(Z), the derivative-of-exp factor.
AdSeriesResult dexp_factor(const Group& G, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Z);

// Solves a' = [phi, a], a(lo) = Y with the classical explicit scheme matching
// cfg (Euler or midpoint) at the same step the evolution of phi would use,
// and reports the distance to Ad along that evolution.
struct OmoriResult {
  Curve alpha;
  double residual_vs_ad = 0.0;   // sup over nodes of |alpha - Ad(evolution, Y)|
  double error_budget = 0.0;     // evolution error estimate
};
OmoriResult omori_transport(const GroupPtr& G, const Curve& phi,
                            const Eigen::VectorXd& Y, const EvolveConfig& cfg);

// Grid check of w(Ad(mu(t), Y)) <= exp(int_lo^t w(phi)) w(Y) + 1e-8 for a
// bracket-submultiplicative seminorm w.
struct GroenwallReport {
  bool holds = true;
  double min_slack = 0.0;
  double max_violation = 0.0;
  int grid = 0;
  std::vector<double> slack;  // per grid node
};
GroenwallReport groenwall_check(const GroupPtr& G, const Curve& phi,
                                const Eigen::VectorXd& Y, const Seminorm& w,
                                const EvolveConfig& cfg, int grid = 129);

// Smallest C on the sample with |ad_{X1} ... ad_{Xn}| <= C^n for n <= n_max
// over tuples drawn from the euclidean ball of the given radius. Composition
// norms follow the euclidean operator norm by power iteration.
struct ConstrictedReport {
  double C = 0.0;
  int samples = 0;
  int n_max = 0;
  std::vector<Eigen::VectorXd> witness;  // tuple achieving C
};
ConstrictedReport constricted_probe(const GroupPtr& G, int n_max, int samples,
                                    unsigned long seed, double radius = 1.0);

double power_iteration_norm(const Eigen::MatrixXd& M, double tol = 1e-12);

}  // namespace prodint
