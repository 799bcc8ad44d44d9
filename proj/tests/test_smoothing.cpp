#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prodint/evolution.hpp"
#include "prodint/lcvs.hpp"
#include "prodint/smoothing.hpp"
#include "support.hpp"

using namespace prodint;
using testsupport::random_fourier;
using testsupport::rng;

namespace {

EvolveConfig fast_cfg(double step = 1.0 / 1024.0) {
  EvolveConfig cfg;
  cfg.scheme = Scheme::midpoint;
  cfg.step = step;
  return cfg;
}

}  // namespace

TEST_CASE("bump profile") {
  const BumpProfile& b = bump();
  CHECK(std::abs(riemann_integral(b.as_curve(), 0, 1, 1e-14)(0) - 1.0) < 1e-12);
  CHECK(b.eval(0.0) == 0.0);
  CHECK(b.eval(1.0) == 0.0);
  CHECK(b.eval(0.0, 1) == 0.0);
  CHECK(b.eval(1.0, 1) == 0.0);

  // Flat ends: sampled derivatives through order 6 stay tiny near 0 and 1.
  for (int s = 0; s <= 6; ++s) {
    CHECK(std::abs(b.eval(1e-3, s)) < 1e-12);
    CHECK(std::abs(b.eval(1.0 - 1e-3, s)) < 1e-12);
  }

  double peak = 0.0;
  bool positive_inside = true;
  for (int i = 1; i < 4000; ++i) {
    double t = double(i) / 4000.0;
    double v = b.eval(t);
    peak = std::max(peak, v);
    // Positivity holds wherever the exponential does not underflow.
    if (t > 0.01 && t < 0.99 && v <= 0.0) positive_inside = false;
  }
  CHECK(positive_inside);
  CHECK(peak <= 2.0);
  CHECK(peak == doctest::Approx(b.eval(0.5)).epsilon(1e-6));

  // Taylor-derived derivatives against plain differences, away from the
  // boundary layers where the higher derivatives blow up.
  for (int s = 0; s <= 2; ++s) {
    for (double t : {0.3, 0.45, 0.62}) {
      double h = 1e-3;
      double fd = (b.eval(t - 2 * h, s) - 8 * b.eval(t - h, s) + 8 * b.eval(t + h, s) -
                   b.eval(t + 2 * h, s)) /
                  (12 * h);
      CHECK(std::abs(fd - b.eval(t, s + 1)) < 1e-7 * std::max(1.0, std::abs(b.eval(t, s + 1))));
    }
  }
}

TEST_CASE("reparam profile fixes breakpoints and stays monotone") {
  Curve single = reparam_profile({0.0, 1.0});
  CHECK(single(0.0)(0) == doctest::Approx(0.0));
  CHECK(single(1.0)(0) == doctest::Approx(1.0).epsilon(1e-12));

  Curve two = reparam_profile({0.0, 0.5, 1.0});
  CHECK(two(0.5)(0) == doctest::Approx(0.5).epsilon(1e-12));

  Curve three = reparam_profile({0.0, 0.2, 0.9, 1.5});
  for (double t : {0.2, 0.9}) CHECK(three(t)(0) == doctest::Approx(t).epsilon(1e-12));
  double min_speed = 1e300, max_speed = 0.0;
  for (int i = 0; i <= 3000; ++i) {
    double t = 1.5 * double(i) / 3000.0;
    double v = three.eval(t, 1)(0);
    min_speed = std::min(min_speed, v);
    max_speed = std::max(max_speed, v);
  }
  CHECK(min_speed >= 0.0);
  CHECK(max_speed <= 2.0);

  // Derivatives of every sampled order vanish at the breakpoints.
  for (int s = 1; s <= 5; ++s)
    for (double t : {0.2, 0.9}) CHECK(std::abs(three.eval(t, s)(0)) < 1e-12);
}

TEST_CASE("smoothing a single constant segment keeps the integral") {
  auto G = make_group("so3");
  auto gen = rng(101);
  Eigen::VectorXd X = G->random_algebra(gen, 0.8);
  PiecewiseCurve pw = PiecewiseCurve::single(Curve::constant(X, 0, 1.5));
  Curve psi = smooth_piecewise(pw);
  EvolutionResult ev = evolve(G, psi, fast_cfg());
  double dist = chart_distance(*G, ev.endpoint(), G->exp((1.5 * X).eval())).value;
  CHECK(dist <= 5 * ev.error_estimate() + 1e-12);
}

TEST_CASE("smoothing preserves piecewise product integrals") {
  auto gen = rng(102);
  std::vector<GroupPtr> groups = {make_group("so3"), make_group("su2"),
                                  make_group("heisenberg3"), make_group("torus", 2),
                                  make_group("unit_group", 2)};
  for (const auto& G : groups) {
    CAPTURE(G->name());
    PiecewiseCurve pw = PiecewiseCurve::step(
        {0, 0.4, 1}, {G->random_algebra(gen, 0.7), G->random_algebra(gen, 0.7)});
    Curve psi = smooth_piecewise(pw);
    EvolutionResult direct = evolve_piecewise(G, pw, fast_cfg());
    EvolutionResult smooth = evolve(G, psi, fast_cfg());
    double dist = chart_distance(*G, direct.endpoint(), smooth.endpoint()).value;
    CHECK(dist <= 5 * (direct.error_estimate() + smooth.error_estimate()) + 1e-12);
  }
}

TEST_CASE("smoothing an analytic piecewise input") {
  auto G = make_group("so3");
  auto gen = rng(103);
  PiecewiseCurve pw(
      {0, 0.5, 1},
      {random_fourier(gen, 3, 2, 0, 0.5, 0.6), random_fourier(gen, 3, 2, 0.5, 1, 0.6)});
  Curve psi = smooth_piecewise(pw);
  EvolutionResult direct = evolve_piecewise(G, pw, fast_cfg());
  EvolutionResult smooth = evolve(G, psi, fast_cfg());
  double dist = chart_distance(*G, direct.endpoint(), smooth.endpoint()).value;
  CHECK(dist <= 5 * (direct.error_estimate() + smooth.error_estimate()) + 1e-12);

  // Derivative jumps across the interior breakpoint through order 4.
  for (int s = 0; s <= 4; ++s) {
    Eigen::VectorXd left = psi.eval(0.5 - 1e-9, s);
    Eigen::VectorXd right = psi.eval(0.5 + 1e-9, s);
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-8);
  }

  // Sup-seminorm inflation is at most the speed bound.
  Seminorm q = sup_seminorm();
  double qpsi = ck_seminorm(psi, q, 0).value;
  double qphi = std::max(ck_seminorm(pw.segment(0), q, 0).value,
                         ck_seminorm(pw.segment(1), q, 0).value);
  CHECK(qpsi <= 2.0 * qphi + 1e-12);
}

TEST_CASE("mackey schedule gluing") {
  auto G = make_group("so3");

  // All elements equal: zero increments, zero curve.
  auto gen = rng(104);
  MackeySchedule trivial = MackeySchedule::from_elements(
      G, std::vector<Elem>(8, G->random_near_identity(gen, 0.3)));
  Curve zero = mackey_glue(trivial, 6);
  for (double t : {0.1, 0.5, 0.99}) CHECK(zero(t).norm() == 0.0);

  // Scalar schedule: partial sums of 2^{-n^2}.
  auto A = make_group("abelian", 1);
  std::vector<Elem> gs;
  double sum = 0.0;
  std::vector<double> partial;
  for (int n = 0; n <= 7; ++n) {
    Eigen::VectorXd v(1);
    v(0) = sum;
    gs.push_back(v);
    partial.push_back(sum);
    sum += std::pow(2.0, -double(n + 1) * double(n + 1));
  }
  MackeySchedule sched = MackeySchedule::from_elements(A, gs);
  Curve phi = mackey_glue(sched, 6);
  EvolutionResult ev = evolve(A, phi, EvolveConfig{Scheme::midpoint, 1.0 / 4096.0});
  // The evolution runs toward g_N^-1 g_0 = -(partial sum at N).
  double expect = -(partial[7] - partial[0]);
  CHECK(std::abs(ev.endpoint()(0) - expect) < 1e-8);
}

TEST_CASE("mackey glue approaches the limit rotation") {
  auto G = make_group("so3");
  auto gen = rng(105);
  Eigen::VectorXd axis = G->random_algebra(gen, 1.0).normalized();
  Elem R = G->exp((0.9 * axis).eval());

  // g_n = R exp(eps_n u) with eps_n = 2^{-(n+1)^2}: increments along a fixed
  // axis commute, so |X_n| = (eps_{n-1} - eps_n) <= 2^{-n^2}.
  std::vector<Elem> gs;
  for (int n = 0; n <= 7; ++n) {
    double eps = std::pow(2.0, -double(n + 1) * double(n + 1));
    gs.push_back(G->mult(R, G->exp((eps * axis).eval())));
  }
  MackeySchedule sched = MackeySchedule::from_elements(G, gs);
  const int N = 6;
  Curve phi = mackey_glue(sched, N);
  EvolutionResult ev = evolve(G, phi, EvolveConfig{Scheme::midpoint, 1.0 / 8192.0});

  // Direct finite product oracle: unchart(X_N) ... unchart(X_1) = g_N^-1 g_0.
  Elem oracle = G->identity();
  for (int n = 1; n <= N; ++n) oracle = G->mult(G->unchart(sched.X[n]), oracle);
  CHECK(chart_distance(*G, G->mult(G->inv(sched.g[N]), sched.g[0]), oracle).value <
        1e-13);

  Elem reached = G->inv(G->mult(ev.endpoint(), G->inv(sched.g[0])));
  CHECK(chart_distance(*G, reached, R).value < 1e-5);

  // The glued curve is smooth including at breakpoints and flat near t = 1.
  for (int n : {1, 2}) {
    double delta = sched.t[n + 1] - sched.t[n];
    double t = sched.t[n] + 0.4 * delta;
    double h = 1e-3 * delta;
    Eigen::VectorXd fd = (phi.eval(t - 2 * h, 0) - 8 * phi.eval(t - h, 0) +
                          8 * phi.eval(t + h, 0) - phi.eval(t + 2 * h, 0)) /
                         (12 * h);
    CHECK((fd - phi.eval(t, 1)).cwiseAbs().maxCoeff() < 1e-6);
  }
  for (int s = 0; s <= 3; ++s) {
    CHECK(phi.eval(sched.t[2], s).norm() < 1e-12);
    CHECK(phi.eval(0.995, s).norm() < 1e-6);
  }
}

TEST_CASE("mackey glue rejects slow decay") {
  auto G = make_group("so3");
  std::vector<Elem> gs;
  for (int n = 0; n <= 4; ++n)
    gs.push_back(G->exp((0.3 * double(n) * Eigen::Vector3d::UnitX()).eval()));
  MackeySchedule sched = MackeySchedule::from_elements(G, gs);
  CHECK_THROWS_WITH_AS(mackey_glue(sched, 3),
                       doctest::Contains("decay violated first at n = 2"),
                       std::invalid_argument);
}
