#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "prodint/muconvex.hpp"
#include "support.hpp"

using namespace prodint;
using testsupport::random_fourier;
using testsupport::rng;

namespace {

EvolveConfig fine_cfg(double step = 5e-4) {
  EvolveConfig cfg;
  cfg.scheme = Scheme::midpoint;
  cfg.step = step;
  return cfg;
}

}  // namespace

TEST_CASE("abelian groups satisfy the probe with o = u exactly") {
  auto G = make_group("abelian", 3);
  const Seminorm& u = G->algebra().find("euclid");
  ProbeReport report = mu_convex_probe(G, u, u, 6, 2000, 13);
  CHECK(report.passed());
  CHECK(report.max_violation <= 1e-12);
  CHECK(report.chart_exits == 0);
}

TEST_CASE("unit group passes with the doubled operator seminorm") {
  auto G = make_group("unit_group", 2);
  const Seminorm& u = G->algebra().find("op");
  Seminorm o = scaled_seminorm(u, 2.0, "2*op");
  ProbeReport report = mu_convex_probe(G, u, o, 8, 3000, 14);
  CHECK(report.passed());
  CHECK(report.chart_exits == 0);
}

TEST_CASE("probe reports a replayable witness on violation") {
  // o = u/2 on the reals: a single factor already breaks the bound.
  auto G = make_group("abelian", 1);
  const Seminorm& u = G->algebra().find("euclid");
  Seminorm o = scaled_seminorm(u, 0.5, "u/2");
  ProbeReport report = mu_convex_probe(G, u, o, 4, 500, 15);
  CHECK(!report.passed());
  REQUIRE(!report.witness.empty());
  // Replay the witness: the recorded tuple reproduces the violation.
  Elem prod = G->identity();
  double rhs = 0.0;
  for (const auto& X : report.witness) {
    prod = G->mult(G->unchart(X), prod);
    rhs += o(X);
  }
  CHECK(u(G->chart(prod)) - rhs == doctest::Approx(report.max_violation).epsilon(1e-12));
}

TEST_CASE("probes are deterministic under a fixed seed") {
  auto G = make_group("so3");
  const Seminorm& u = G->algebra().find("euclid");
  Seminorm o = scaled_seminorm(u, 1.5, "1.5u");
  ProbeReport a = mu_convex_probe(G, u, o, 5, 800, 99);
  ProbeReport b = mu_convex_probe(G, u, o, 5, 800, 99);
  CHECK(a.max_violation == b.max_violation);
  CHECK(a.chart_exits == b.chart_exits);
  REQUIRE(a.witness.size() == b.witness.size());
  for (std::size_t i = 0; i < a.witness.size(); ++i)
    CHECK((a.witness[i] - b.witness[i]).norm() == 0.0);
}

TEST_CASE("find_o finds unity for abelian and the torus") {
  auto A = make_group("abelian", 2);
  auto [ca, ra] = find_o(A, A->algebra().find("euclid"), 6, 1500, 16);
  CHECK(ca <= 1.0 + 2e-2);
  CHECK(ra.passed());

  auto T = make_group("torus", 1);
  auto [ct, rt] = find_o(T, T->algebra().find("euclid"), 6, 1500, 17);
  CHECK(ct <= 1.0 + 2e-2);
  CHECK(ct >= 0.97);
  CHECK(rt.passed());
}

TEST_CASE("find_o brackets the rotation group constant") {
  auto G = make_group("so3");
  auto [c, report] = find_o(G, G->algebra().find("op"), 8, 4000, 18);
  CHECK(c >= 1.0 - 1e-2);
  CHECK(c <= 4.0);
  CHECK(report.passed());
}

TEST_CASE("continuity bound along evolutions") {
  auto gen = rng(121);
  for (const char* name : {"so3", "su2"}) {
    auto G = make_group(name);
    const Seminorm& p = G->algebra().find("op");
    std::vector<Curve> phis;
    phis.push_back(Curve::zero(3, 0, 1));
    for (int i = 0; i < 6; ++i) phis.push_back(random_fourier(gen, 3, 2, 0, 1));
    ProbeReport report = continuity_bound_check(G, p, p, phis, fine_cfg());
    CAPTURE(name);
    CHECK(report.passed());
    CHECK(report.chart_exits == 0);
  }

  // Abelian with p = q: the chart is the identity and the seminorm bound of
  // the integral gives the inequality directly.
  auto A = make_group("abelian", 3);
  std::vector<Curve> phis{random_fourier(gen, 3, 2, 0, 1), Curve::zero(3, 0, 1)};
  ProbeReport ar = continuity_bound_check(A, A->algebra().find("euclid"),
                                          A->algebra().find("euclid"), phis, fine_cfg());
  CHECK(ar.passed());
}

TEST_CASE("arclength-equalized reparameterization keeps the integral") {
  auto gen = rng(122);
  auto G = make_group("so3");
  const Seminorm& q = G->algebra().find("euclid");

  L1ContinuityReport c =
      l1_continuity_check(G, q, Curve::constant(Eigen::Vector3d(0.4, 0, 0.2), 0, 1),
                          fine_cfg());
  CHECK(c.ok);

  auto A = make_group("abelian", 2);
  L1ContinuityReport a = l1_continuity_check(A, A->algebra().find("euclid"),
                                             random_fourier(gen, 2, 2, 0, 1), fine_cfg());
  CHECK(a.ok);

  // A narrow spike: most of the q-arclength sits in a short window.
  Curve spike(0, 1, 3, 0, [](double t, int) {
    Eigen::VectorXd v(3);
    double bump = std::exp(-std::pow((t - 0.35) / 0.02, 2));
    v << 4.0 * bump, 0.5, -2.0 * bump;
    return v;
  });
  L1ContinuityReport s = l1_continuity_check(G, q, spike, fine_cfg());
  CHECK(s.ok);
  CHECK(s.substitute_sup <= 1.0 + 1e-9);
}

TEST_CASE("scalar product inequality") {
  CHECK(scalar_product_inequality_max_slack(20000, 8, 23) <= 0.0);
}
