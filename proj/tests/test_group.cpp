#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prodint/group.hpp"
#include "support.hpp"

using namespace prodint;
using testsupport::rng;

namespace {

std::vector<GroupPtr> all_groups() {
  return {make_group("so3"),        make_group("su2"),
          make_group("heisenberg3"), make_group("abelian", 3),
          make_group("torus", 2),   make_group("unit_group", 3),
          make_group("gl", 2)};
}

Eigen::Matrix3d rodrigues_oracle(const Eigen::Vector3d& w) {
  // Independent closed form, written against the axis-angle definition.
  double theta = w.norm();
  Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  if (theta < 1e-300) return I;
  Eigen::Vector3d u = w / theta;
  Eigen::Matrix3d K;
  K << 0, -u(2), u(1), u(2), 0, -u(0), -u(1), u(0), 0;
  return I + std::sin(theta) * K + (1 - std::cos(theta)) * K * K;
}

}  // namespace

TEST_CASE("make_group and parse_group") {
  CHECK(parse_group("abelian(3)")->dim() == 3);
  CHECK(parse_group("unit_group(3)")->dim() == 9);
  CHECK(parse_group("so3")->name() == "so3");
  CHECK_THROWS_AS(make_group("sp4"), std::invalid_argument);
  CHECK_THROWS_AS(make_group("abelian", 0), std::invalid_argument);
  CHECK_THROWS_AS(make_group("gl", -1), std::invalid_argument);
}

TEST_CASE("abelian is coordinate addition with trivial Ad") {
  auto G = make_group("abelian", 2);
  auto gen = rng(31);
  Elem a = G->random_near_identity(gen, 2.0), b = G->random_near_identity(gen, 2.0);
  CHECK((G->mult(a, b) - (a + b)).norm() == 0.0);
  Eigen::VectorXd X = G->random_algebra(gen, 1.0);
  CHECK((G->Ad(a, X) - X).norm() == 0.0);
}

TEST_CASE("heisenberg closed forms") {
  auto G = make_group("heisenberg3");
  Eigen::Vector3d X(0.7, -1.3, 0.4);
  Elem g = G->exp(X);
  CHECK(g(0, 1) == doctest::Approx(0.7));
  CHECK(g(1, 2) == doctest::Approx(-1.3));
  CHECK(g(0, 2) == doctest::Approx(0.4 + 0.5 * 0.7 * (-1.3)));
  CHECK((G->log(g) - X).norm() == 0.0);  // nilpotent: round trip is exact

  // Oracle: the generic matrix series must agree with the closed form.
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  M(0, 1) = X(0);
  M(1, 2) = X(1);
  M(0, 2) = X(2);
  CHECK((matrix_exp(M) - g).norm() < 1e-14);
}

TEST_CASE("so3 chart against the Rodrigues oracle") {
  auto G = make_group("so3");
  Eigen::Vector3d axis(0, 0, M_PI / 2);
  Elem g = G->exp(axis);
  CHECK((g - rodrigues_oracle(axis)).norm() < 1e-13);
  CHECK((G->chart(g) - axis).norm() < 1e-12);

  auto gen = rng(32);
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd X = G->random_algebra(gen, 2.5);
    CHECK((G->exp(X) - rodrigues_oracle(X)).norm() < 1e-12);
    CHECK((G->exp(X) - matrix_exp(ad_operator(*G, X))).norm() < 1e-12);
    CHECK((G->log(G->exp(X)) - X).norm() < 1e-11);
  }
}

TEST_CASE("ad operator") {
  auto H = make_group("heisenberg3");
  Eigen::MatrixXd zero = ad_operator(*H, Eigen::Vector3d::Zero());
  CHECK(zero.norm() == 0.0);

  Eigen::MatrixXd ad1 = ad_operator(*H, Eigen::Vector3d::UnitX());
  CHECK((ad1 * Eigen::Vector3d::UnitY() - Eigen::Vector3d::UnitZ()).norm() == 0.0);
  CHECK((ad1 * Eigen::Vector3d::UnitX()).norm() == 0.0);
  CHECK((ad1 * Eigen::Vector3d::UnitZ()).norm() == 0.0);

  auto G = make_group("so3");
  Eigen::Vector3d X(0.3, -0.2, 0.9);
  Eigen::Matrix3d hat;
  hat << 0, -X(2), X(1), X(2), 0, -X(0), -X(1), X(0), 0;
  CHECK((ad_operator(*G, X) - hat).norm() < 1e-15);
}

TEST_CASE("exp/log round trip and one-parameter subgroups") {
  auto gen = rng(33);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    Elem e = G->identity();
    CHECK((G->exp(Eigen::VectorXd::Zero(G->dim())) - e).norm() < 1e-15);
    for (int i = 0; i < 12; ++i) {
      Eigen::VectorXd X = G->random_algebra(gen, 0.8 * std::min(G->chart_radius(), 2.0));
      CHECK((G->log(G->exp(X)) - X).norm() < 1e-11);
      double s = 0.37, t = -0.21;
      Elem lhs = G->mult(G->exp((s * X).eval()), G->exp((t * X).eval()));
      Elem rhs = G->exp(((s + t) * X).eval());
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
    }
  }
}

TEST_CASE("gl(2) nilpotent exponential") {
  auto G = make_group("gl", 2);
  Eigen::VectorXd X(4);
  Eigen::Matrix2d M;
  M << 0, 1, 0, 0;
  X = Eigen::Map<Eigen::VectorXd>(M.data(), 4);
  Elem g = G->exp(X);
  Eigen::Matrix2d expect;
  expect << 1, 1, 0, 1;
  CHECK((g - expect).norm() < 1e-15);
}

TEST_CASE("group type invariants on random elements") {
  auto gen = rng(34);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    Elem e = G->identity();
    for (int i = 0; i < 10; ++i) {
      Elem g = G->random_near_identity(gen, 0.4);
      CHECK(G->element_ok(g));
      CHECK((G->mult(g, G->inv(g)) - e).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((G->unchart(G->chart(g)) - g).cwiseAbs().maxCoeff() < 1e-12);

      Eigen::VectorXd X = G->random_algebra(gen, 1.0);
      Eigen::VectorXd Y = G->random_algebra(gen, 1.0);
      Eigen::VectorXd Z = G->random_algebra(gen, 1.0);
      CHECK((G->Ad(e, X) - X).norm() == 0.0);
      CHECK((G->bracket(X, Y) + G->bracket(Y, X)).norm() < 1e-12);
      Eigen::VectorXd jacobi = G->bracket(X, G->bracket(Y, Z)) +
                               G->bracket(Y, G->bracket(Z, X)) +
                               G->bracket(Z, G->bracket(X, Y));
      CHECK(jacobi.norm() < 1e-12);
      Eigen::VectorXd lhs = G->Ad(g, G->bracket(X, Y));
      Eigen::VectorXd rhs = G->bracket(G->Ad(g, X), G->Ad(g, Y));
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
}

TEST_CASE("Ad agrees with the conjugation difference quotient") {
  auto gen = rng(35);
  const double h = 1e-5;
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    for (int i = 0; i < 6; ++i) {
      Elem g = G->random_near_identity(gen, 0.4);
      Eigen::VectorXd X = G->random_algebra(gen, 1.0);
      Elem conj = G->mult(G->mult(g, G->unchart((h * X).eval())), G->inv(g));
      Eigen::VectorXd quotient = G->chart(conj) / h;
      CHECK((quotient - G->Ad(g, X)).norm() < 1e-8);
    }
  }
}

TEST_CASE("unit group operator norm is submultiplicative") {
  auto G = make_group("unit_group", 3);
  const Seminorm& op = G->algebra().find("op");
  auto gen = rng(36);
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd a = G->random_algebra(gen, 2.0);
    Eigen::VectorXd b = G->random_algebra(gen, 2.0);
    Eigen::Map<Eigen::Matrix3d> A(a.data()), B(b.data());
    Eigen::MatrixXd AB = A * B;
    Eigen::VectorXd ab = Eigen::Map<Eigen::VectorXd>(AB.data(), 9);
    CHECK(op(ab) <= op(a) * op(b) + 1e-12);
  }
}

TEST_CASE("declared bracket-submultiplicative seminorms") {
  auto gen = rng(37);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    REQUIRE(!G->submultiplicative_seminorm().empty());
    const Seminorm& w = G->algebra().find(G->submultiplicative_seminorm());
    for (int i = 0; i < 25; ++i) {
      Eigen::VectorXd X = G->random_algebra(gen, 2.0);
      Eigen::VectorXd Y = G->random_algebra(gen, 2.0);
      CHECK(w(G->bracket(X, Y)) <= w(X) * w(Y) + 1e-12);
    }
  }
}

TEST_CASE("seminorm families are homogeneous, subadditive, and separating") {
  auto gen = rng(38);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  for (const auto& G : all_groups()) {
    CAPTURE(G->name());
    const auto& spec = G->algebra();
    bool separating = false;
    for (const auto& s : spec.seminorms()) {
      double worst = 0.0;
      bool positive = true;
      for (int i = 0; i < 30; ++i) {
        Eigen::VectorXd X = G->random_algebra(gen, 2.0);
        Eigen::VectorXd Y = G->random_algebra(gen, 2.0);
        double l = lam(gen);
        worst = std::max(worst, std::abs(s((l * X).eval()) - std::abs(l) * s(X)));
        worst = std::max(worst, std::max(0.0, s((X + Y).eval()) - s(X) - s(Y)));
        if (X.norm() > 1e-9 && s(X) <= 0.0) positive = false;
      }
      CHECK(worst < 1e-12);
      if (positive) separating = true;
    }
    CHECK(separating);
    for (const auto& [p, q] : spec.dominations()) {
      const Seminorm& sp = spec.find(p);
      const Seminorm& sq = spec.find(q);
      for (int i = 0; i < 10; ++i) {
        Eigen::VectorXd X = G->random_algebra(gen, 2.0);
        CHECK(sp(X) <= sq(X) + 1e-12);
      }
    }
  }
}

TEST_CASE("torus wraps through the seam") {
  auto G = make_group("torus", 1);
  Eigen::VectorXd a(1), b(1);
  a << M_PI - 0.05;
  b << 0.2;
  Elem prod = G->mult(a, b);
  CHECK(prod(0) == doctest::Approx(-M_PI + 0.15));
  ChartDistance d = chart_distance(*G, a, G->mult(a, b));
  CHECK(d.in_chart);
  CHECK(d.value == doctest::Approx(0.2));
}

TEST_CASE("principal matrix log round trips near the identity") {
  auto gen = rng(39);
  for (int i = 0; i < 10; ++i) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Random(3, 3) * 0.4;
    Eigen::MatrixXd g = matrix_exp(A);
    CHECK((matrix_exp(matrix_log(g)) - g).norm() < 1e-12);
  }
  // Off the principal branch: eigenvalue on the closed negative real axis.
  Eigen::Matrix2d neg;
  neg << -1, 0, 0, 1;
  CHECK_THROWS_AS(matrix_log(neg), OutOfChartError);
}

TEST_CASE("su2 covers so3 compatibly") {
  auto S = make_group("su2");
  auto R = make_group("so3");
  auto gen = rng(40);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXd X = S->random_algebra(gen, 2.0);
    Elem q = S->exp(X);
    CHECK((su2_to_so3(q) - R->exp(X)).norm() < 1e-12);  // covering intertwines exp
    Elem q2 = S->random_near_identity(gen, 1.0);
    CHECK((su2_to_so3(S->mult(q, q2)) - su2_to_so3(q) * su2_to_so3(q2)).norm() < 1e-12);
  }
}

TEST_CASE("singular matrix elements are rejected") {
  auto G = make_group("gl", 2);
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  CHECK_THROWS_AS(G->inv(s), SingularElementError);
  CHECK(!G->element_ok(s));
}
