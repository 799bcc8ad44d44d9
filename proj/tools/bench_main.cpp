// Compares the OpenMP kernels against the serial reference on the two
// batch-heavy workloads: chart-product probe sampling and grid suprema of
// identity residuals. Usage: prodint_bench [samples] [grid].

#include <chrono>
#include <cstdio>
#include <random>

#include "prodint/group.hpp"
#include "prodint/logderiv.hpp"
#include "prodint/parallel.hpp"
#include "prodint/sampling.hpp"

using namespace prodint;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

template <typename Fn>
void bench(const char* name, long n, Fn&& f) {
  auto t0 = std::chrono::steady_clock::now();
  double serial = par::max_reduce_serial(n, f);
  double t_serial = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  double parallel = par::max_reduce(n, f);
  double t_parallel = ms_since(t0);

  std::printf("%-28s n=%-8ld serial %9.2f ms   omp %9.2f ms   speedup %.2fx   %s\n",
              name, n, t_serial, t_parallel, t_serial / t_parallel,
              serial == parallel ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  long samples = argc > 1 ? std::atol(argv[1]) : 40000;
  long grid = argc > 2 ? std::atol(argv[2]) : 40000;

  auto G = make_group("so3");
  const Seminorm& u = G->algebra().find("euclid");

  std::printf("threads: %d (cap via PRODINT_THREADS)\n", par::max_threads());

  bench("chart-product probe", samples, [&](long i) {
    std::mt19937_64 gen(0xabcdef + 0x9e3779b97f4a7c15ULL * (i + 1));
    std::exponential_distribution<double> expo(1.0);
    Elem prod = G->identity();
    double rhs = 0.0;
    for (int k = 0; k < 6; ++k) {
      Eigen::VectorXd X = G->random_algebra(gen, 1.0);
      double w = expo(gen) / 6.0;
      X *= w / std::max(u(X), 1e-12);
      prod = G->mult(G->unchart(X), prod);
      rhs += u(X);
    }
    return u(G->chart(prod)) - rhs;
  });

  std::mt19937_64 gen(17);
  GroupCurve mu = sampling::analytic_group_curve(gen, G, 0, 1);
  GroupCurve nu = sampling::analytic_group_curve(gen, G, 0, 1);
  GroupCurve prod = mu.mult(nu);
  Curve dmu = der(mu), dnu = der(nu), dprod = der(prod);
  bench("product-rule grid sup", grid, [&](long i) {
    double t = double(i) / double(grid - 1);
    return (dprod(t) - dmu(t) - G->Ad(mu(t), dnu(t))).norm();
  });

  return 0;
}
