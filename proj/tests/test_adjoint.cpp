#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prodint/adjoint.hpp"
#include "prodint/lcvs.hpp"
#include "support.hpp"

using namespace prodint;
using testsupport::random_fourier;
using testsupport::rng;

namespace {

EvolveConfig fast_cfg(Scheme s = Scheme::midpoint, double step = 1.0 / 512.0) {
  EvolveConfig cfg;
  cfg.scheme = s;
  cfg.step = step;
  return cfg;
}

std::vector<GroupPtr> matrix_groups() {
  return {make_group("so3"), make_group("su2"), make_group("heisenberg3"),
          make_group("unit_group", 3), make_group("gl", 2)};
}

}  // namespace

TEST_CASE("ad series basics") {
  auto gen = rng(91);
  auto G = make_group("so3");
  Eigen::VectorXd X = G->random_algebra(gen, 1.0), Y = G->random_algebra(gen, 1.0);
  AdSeriesResult at_zero = ad_series(*G, X, Y, 0.0);
  CHECK((at_zero.value - Y).norm() == 0.0);

  auto H = make_group("heisenberg3");
  AdSeriesResult nil = ad_series(*H, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), 1.0);
  CHECK(nil.nilpotent_exact);
  CHECK(nil.terms_used <= 3);
  CHECK((nil.value - Eigen::Vector3d(0, 1, 1)).norm() == 0.0);  // Y + [X, Y]
}

TEST_CASE("ad series equals Ad of the exponential") {
  auto gen = rng(92);
  for (const auto& G : matrix_groups()) {
    CAPTURE(G->name());
    for (int i = 0; i < 8; ++i) {
      Eigen::VectorXd X = G->random_algebra(gen, 1.0);
      Eigen::VectorXd Y = G->random_algebra(gen, 1.0);
      std::uniform_real_distribution<double> tt(-2.0, 2.0);
      double t = tt(gen) / std::max(1.0, X.norm());  // keep |tX| <= 2
      AdSeriesResult s = ad_series(*G, X, Y, t);
      Eigen::VectorXd direct = G->Ad(G->exp((t * X).eval()), Y);
      CHECK((s.value - direct).norm() < 1e-11);
      CHECK((s.truncation_bound <= 1e-15 * std::max(1.0, s.value.norm()) ||
             s.nilpotent_exact));
    }
  }
}

TEST_CASE("omori transport") {
  auto gen = rng(93);
  auto G = make_group("so3");
  Eigen::VectorXd Y = G->random_algebra(gen, 1.0);

  OmoriResult zero = omori_transport(G, Curve::zero(3, 0, 1), Y, fast_cfg());
  CHECK((zero.alpha(0.7) - Y).norm() < 1e-14);
  CHECK(zero.residual_vs_ad < 1e-13);

  auto A = make_group("abelian", 3);
  OmoriResult ab = omori_transport(A, random_fourier(gen, 3, 2, 0, 1), Y, fast_cfg());
  CHECK((ab.alpha(0.4) - Y).norm() < 1e-13);

  Curve phi = random_fourier(gen, 3, 2, 0, 1);
  OmoriResult full = omori_transport(G, phi, Y, fast_cfg());
  CHECK(full.residual_vs_ad <= 5 * full.error_budget + 1e-12);
  // The transported curve solves the bracket equation: check its declared
  // derivative against differences.
  CHECK(derivative_consistency_residual(full.alpha, 0, 9) < 1e-5);
}

TEST_CASE("omori transport matches Ad along the evolution on every instance") {
  auto gen = rng(94);
  for (const auto& G : matrix_groups()) {
    CAPTURE(G->name());
    Curve phi = random_fourier(gen, G->dim(), 2, 0, 1, 0.6);
    Eigen::VectorXd Y = G->random_algebra(gen, 1.0);
    OmoriResult r = omori_transport(G, phi, Y, fast_cfg());
    CHECK(r.residual_vs_ad <= 5 * r.error_budget + 1e-12);
  }
}

TEST_CASE("dexp factor") {
  auto gen = rng(95);
  auto G = make_group("so3");
  Eigen::VectorXd Z = G->random_algebra(gen, 1.0);
  CHECK((dexp_factor(*G, Eigen::Vector3d::Zero(), Z).value - Z).norm() == 0.0);

  // Commuting direction: X parallel to Z.
  Eigen::VectorXd X = 0.8 * Z;
  CHECK((dexp_factor(*G, X, Z).value - Z).norm() < 1e-15);

  auto H = make_group("heisenberg3");
  AdSeriesResult h = dexp_factor(*H, Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY());
  CHECK((h.value - Eigen::Vector3d(0, 1, -0.5)).norm() < 1e-15);  // e2 - e3/2
}

TEST_CASE("dexp factor equals the integrated ad series") {
  auto gen = rng(96);
  for (const auto& G : matrix_groups()) {
    CAPTURE(G->name());
    Eigen::VectorXd X = G->random_algebra(gen, 1.2);
    Eigen::VectorXd Z = G->random_algebra(gen, 1.0);
    Curve integrand(0, 1, G->dim(), 0, [&G, X, Z](double s, int) {
      return ad_series(*G, (-X).eval(), Z, s).value;
    });
    Eigen::VectorXd integral = riemann_integral(integrand, 0, 1);
    CHECK((integral - dexp_factor(*G, X, Z).value).norm() < 1e-10);
  }
}

TEST_CASE("adjoint growth bound along evolutions") {
  auto gen = rng(97);
  auto G = make_group("so3");
  const Seminorm& w = G->algebra().find(G->submultiplicative_seminorm());
  Eigen::VectorXd Y = G->random_algebra(gen, 1.0);

  GroenwallReport zero = groenwall_check(G, Curve::zero(3, 0, 1), Y, w, fast_cfg());
  CHECK(zero.holds);
  CHECK(zero.min_slack == doctest::Approx(1e-8).epsilon(1e-3));  // equality case

  auto A = make_group("abelian", 3);
  GroenwallReport ab = groenwall_check(A, random_fourier(gen, 3, 2, 0, 1), Y,
                                       A->algebra().find("euclid"), fast_cfg());
  CHECK(ab.holds);

  for (int i = 0; i < 5; ++i) {
    Curve phi = random_fourier(gen, 3, 2, 0, 1);
    GroenwallReport r = groenwall_check(G, phi, G->random_algebra(gen, 1.0), w,
                                        fast_cfg(Scheme::midpoint, 1.0 / 2048.0));
    CHECK(r.holds);
  }

  CHECK_THROWS_AS(groenwall_check(G, Curve::zero(3, 0, 1), Y,
                                  scaled_seminorm(w, 0.25, "too-small"), fast_cfg()),
                  std::invalid_argument);
}

TEST_CASE("scalar integral inequality implies the exponential bound") {
  auto gen = rng(98);
  // Families built to satisfy a <= C + int a b by construction.
  for (int rep = 0; rep < 6; ++rep) {
    Curve braw = random_fourier(gen, 1, 2, 0, 1);
    Curve graw = random_fourier(gen, 1, 2, 0, 1);
    std::uniform_real_distribution<double> cd(0.5, 2.0);
    double C = cd(gen);
    auto beta = [braw](double t) { return braw(t)(0) * braw(t)(0); };
    auto gpos = [graw](double t) { return 0.3 * graw(t)(0) * graw(t)(0); };
    Antiderivative Ib(
        [&](double t) {
          Eigen::VectorXd v(1);
          v(0) = beta(t);
          return v;
        },
        0, 1);
    Antiderivative Ig(
        [&](double t) {
          Eigen::VectorXd v(1);
          v(0) = gpos(t);
          return v;
        },
        0, 1);
    for (int i = 0; i <= 64; ++i) {
      double t = i / 64.0;
      double alpha = (C - Ig(t)(0)) * std::exp(Ib(t)(0));
      if (alpha < 0) continue;
      CHECK(alpha <= C * std::exp(Ib(t)(0)) + 1e-12);
    }
  }
}

TEST_CASE("constricted probe") {
  auto G = make_group("so3");
  ConstrictedReport z = constricted_probe(G, 4, 1, 7, 0.0);
  CHECK(z.C == 0.0);

  auto H = make_group("heisenberg3");
  ConstrictedReport h = constricted_probe(H, 6, 200, 8, 1.0);
  // Products of two or more ad's vanish, so C is capped by the single-factor
  // norm, which on the unit ball is at most 1.
  CHECK(h.C <= 1.0 + 1e-9);

  ConstrictedReport s = constricted_probe(G, 6, 400, 9, 1.0);
  CHECK(s.C <= 1.0 + 1e-9);
  // Oracle: |ad_X| over the euclidean ball equals |X| (largest singular value).
  double svd_worst = 0.0;
  auto gen2 = rng(9);
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd X = G->random_algebra(gen2, 1.0);
    svd_worst = std::max(
        svd_worst, G->ad_matrix(X).jacobiSvd().singularValues()(0) / X.norm());
  }
  CHECK(svd_worst == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("power iteration matches SVD") {
  auto gen = rng(99);
  for (int i = 0; i < 20; ++i) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Random(4, 4);
    double piter = power_iteration_norm(M);
    double svd = M.jacobiSvd().singularValues()(0);
    CHECK(piter == doctest::Approx(svd).epsilon(1e-10));
  }
}
