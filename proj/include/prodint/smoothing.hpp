#pragma once

#include <vector>

#include "prodint/curve.hpp"
#include "prodint/group.hpp"

namespace prodint {

// Smooth probability density on [0, 1] with all endpoint derivatives zero and
// values in [0, 2].
class BumpProfile {
 public:
  BumpProfile();
  double normalization() const { return c0_; }
  double eval(double t, int s = 0) const;
  Curve as_curve() const;

 private:
  double c0_;
};

const BumpProfile& bump();

// The reparameterization rho(t) = lo + int_lo^t speed, where the speed glues
// one bump per segment. It fixes every breakpoint, and all its derivatives of
// order >= 1 vanish there.
Curve reparam_profile(const std::vector<double>& breakpoints);

// psi = speed * (phi o rho): a smooth curve with the same product integral as
// the piecewise input.
Curve smooth_piecewise(const PiecewiseCurve& pw);

// Breakpoints t_n = sum_{k<=n} 2^-k with group elements g_n, chart increments
// X_n = chart(g_n^-1 g_{n-1}) and scaled increments Y_n = 2^{n+1} X_n.
struct MackeySchedule {
  GroupPtr group;
  std::vector<Elem> g;
  std::vector<Eigen::VectorXd> X;  // X[0] = 0
  std::vector<Eigen::VectorXd> Y;
  std::vector<double> t;  // t[0] = 0, one entry past the last element

  static MackeySchedule from_elements(GroupPtr G, std::vector<Elem> elements);
  std::size_t count() const { return g.size(); }
};

// The glued smooth curve whose evolution telescopes through the schedule:
// the product integral to t_{n+1} equals unchart(X_n) ... unchart(X_1).
// Requires |X_n| <= decay_c * 2^{-n^2} on the prefix n = 1..N.
Curve mackey_glue(const MackeySchedule& seq, int N, double decay_c = 1.0);

}  // namespace prodint
