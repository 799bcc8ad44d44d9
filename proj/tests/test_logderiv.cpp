#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prodint/logderiv.hpp"
#include "support.hpp"

using namespace prodint;
using testsupport::random_fourier;
using testsupport::random_group_curve;
using testsupport::random_reparam;
using testsupport::rng;

namespace {

std::vector<GroupPtr> all_groups() {
  return {make_group("so3"),        make_group("su2"),
          make_group("heisenberg3"), make_group("abelian", 3),
          make_group("torus", 2),   make_group("unit_group", 3),
          make_group("gl", 2)};
}

Curve identity_scalar(double lo, double hi) {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(1), one = Eigen::VectorXd::Ones(1);
  return Curve::polynomial({zero, one}, lo, hi);
}

}  // namespace

TEST_CASE("der of one-parameter subgroups is the constant generator") {
  auto gen = rng(51);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    Eigen::VectorXd X = G->random_algebra(gen, 0.9);
    GroupCurve mu = GroupCurve::one_parameter(G, X, identity_scalar(0, 1));
    Curve d = der(mu);
    for (double t : {0.0, 0.31, 0.77, 1.0}) CHECK((d(t) - X).norm() < 1e-11);
  }
}

TEST_CASE("der of a constant curve vanishes") {
  auto gen = rng(52);
  for (const auto& G : all_groups()) {
    GroupCurve mu = GroupCurve::constant(G, G->random_near_identity(gen, 0.3), 0, 2);
    Curve d = der(mu);
    CHECK(d(0.5).norm() < 1e-14);
  }
}

TEST_CASE("der with quadratic clock against a difference-quotient oracle") {
  auto G = make_group("so3");
  Eigen::VectorXd e3 = Eigen::Vector3d::UnitZ();
  Curve clock = Curve::polynomial(
      {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)}, 0,
      1.2);
  GroupCurve mu = GroupCurve::one_parameter(G, e3, clock);
  Curve d = der(mu);
  for (double t : {0.1, 0.5, 1.1}) {
    CHECK((d(t) - 2.0 * t * e3).norm() < 1e-12);
    // Oracle: plain central quotient of log(mu(t+h) mu(t)^-1) at h = 1e-6.
    double h = 1e-6;
    Elem inv_here = G->inv(mu(t));
    Eigen::VectorXd fd = (G->log(G->mult(mu(t + h), inv_here)) -
                          G->log(G->mult(mu(t - h), inv_here))) /
                         (2 * h);
    CHECK((d(t) - fd).norm() < 1e-6);
  }
}

TEST_CASE("product rule") {
  auto gen = rng(53);

  auto G = make_group("so3");
  GroupCurve mu = random_group_curve(gen, G, 0, 1);
  GroupCurve nug = GroupCurve::constant(G, G->random_near_identity(gen, 0.3), 0, 1);
  CHECK(product_rule_residual(mu, nug) < 1e-10);  // right translation invariance

  auto A = make_group("abelian", 3);
  CHECK(product_rule_residual(random_group_curve(gen, A, 0, 1),
                              random_group_curve(gen, A, 0, 1)) < 1e-12);

  Curve sint(0, 1, 1, kOrderSmooth, [](double t, int s) {
    Eigen::VectorXd v(1);
    v(0) = std::sin(t + 0.5 * M_PI * s);
    return v;
  });
  GroupCurve m1 = GroupCurve::one_parameter(G, Eigen::Vector3d::UnitX(),
                                            identity_scalar(0, 1));
  GroupCurve m2 = GroupCurve::one_parameter(G, Eigen::Vector3d::UnitY(), sint);
  CHECK(product_rule_residual(m1, m2) < 1e-8);
}

TEST_CASE("inverse rule") {
  auto gen = rng(54);
  auto G = make_group("so3");
  GroupCurve onep = GroupCurve::one_parameter(G, G->random_algebra(gen, 1.0),
                                              identity_scalar(0, 1));
  CHECK(inverse_rule_residual(onep) < 1e-10);

  auto A = make_group("abelian", 3);
  CHECK(inverse_rule_residual(random_group_curve(gen, A, 0, 1)) < 1e-12);
  CHECK(inverse_rule_residual(random_group_curve(gen, G, 0, 1)) < 1e-8);
}

TEST_CASE("quotient rule") {
  auto gen = rng(55);
  auto G = make_group("su2");
  GroupCurve mu = random_group_curve(gen, G, 0, 1);
  CHECK(quotient_rule_residual(mu, mu) < 1e-12);

  GroupCurve at_e = GroupCurve::constant(G, G->identity(), 0, 1);
  GroupCurve nu = random_group_curve(gen, G, 0, 1);
  CHECK(quotient_rule_residual(at_e, nu) < 1e-12);
  CHECK(quotient_rule_residual(mu, nu) < 1e-8);
}

TEST_CASE("substitution rule") {
  auto gen = rng(56);
  auto G = make_group("so3");
  GroupCurve mu = random_group_curve(gen, G, 0, 1);
  CHECK(substitution_rule_residual(mu, identity_scalar(0, 1)) < 1e-12);

  // Affine clock on a one-parameter subgroup: both sides equal c X.
  Eigen::VectorXd X = G->random_algebra(gen, 0.8);
  GroupCurve onep = GroupCurve::one_parameter(G, X, identity_scalar(0, 2));
  Eigen::VectorXd c0(1), c1(1);
  c0 << 0.3;
  c1 << 1.5;
  Curve affine = Curve::polynomial({c0, c1}, 0, 1);
  CHECK(substitution_rule_residual(onep, affine) < 1e-11);

  CHECK(substitution_rule_residual(mu, random_reparam(gen, 0, 1)) < 1e-8);
}

TEST_CASE("all rule residuals stay at rounding level across the instances") {
  auto gen = rng(57);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    GroupCurve mu = random_group_curve(gen, G, 0, 1);
    GroupCurve nu = random_group_curve(gen, G, 0, 1);
    Curve rho = random_reparam(gen, 0, 1);
    CHECK(product_rule_residual(mu, nu, 65) < 1e-8);
    CHECK(inverse_rule_residual(mu, 65) < 1e-8);
    CHECK(quotient_rule_residual(mu, nu, 65) < 1e-8);
    CHECK(substitution_rule_residual(mu, rho, 65) < 1e-8);
  }
}

TEST_CASE("difference-quotient fallback stays within its looser budget") {
  auto gen = rng(58);
  auto G = make_group("so3");
  GroupCurve analytic = random_group_curve(gen, G, 0, 1);
  GroupCurve sampled(G, 0, 1, 2, [analytic](double t) { return analytic(t); });
  REQUIRE(!sampled.has_analytic_derivative());
  CHECK(product_rule_residual(sampled, sampled, 65) < 1e-5);
  CHECK(inverse_rule_residual(sampled, 65) < 1e-5);
}

TEST_CASE("equal logarithmic derivatives force equality up to right translation") {
  auto gen = rng(59);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    GroupCurve mu = random_group_curve(gen, G, 0, 1);
    GroupCurve nu = mu.right_translated(G->random_near_identity(gen, 0.3));

    Curve dmu = der(mu), dnu = der(nu);
    double dd = 0.0;
    for (int i = 0; i <= 64; ++i)
      dd = std::max(dd, (dmu(i / 64.0) - dnu(i / 64.0)).norm());
    REQUIRE(dd < 1e-12);

    Elem mu0 = G->inv(mu(0)), nu0 = G->inv(nu(0));
    double dist = 0.0;
    for (int i = 0; i <= 64; ++i) {
      double t = i / 64.0;
      dist = std::max(dist, chart_distance(*G, G->mult(mu(t), mu0),
                                           G->mult(nu(t), nu0))
                                .value);
    }
    CHECK(dist < 1e-6);
  }
}
