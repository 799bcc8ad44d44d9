#include "prodint/muconvex.hpp"

#include <cmath>
#include <random>

#include "prodint/parallel.hpp"
#include "prodint/quadrature.hpp"

namespace prodint {

namespace {

struct Tuple {
  std::vector<Eigen::VectorXd> directions;  // unit vectors in the u seminorm
  std::vector<double> weights;              // Dirichlet split, sums to one
};

Tuple sample_tuple(const Group& G, const Seminorm& u, int n_max, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> len(1, n_max);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  Tuple tuple;
  int n = len(gen);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd d(G.dim());
    double nu = 0.0;
    do {
      for (int j = 0; j < G.dim(); ++j) d(j) = normal(gen);
      nu = u(d);
    } while (nu < 1e-12);
    tuple.directions.push_back((d / nu).eval());
    tuple.weights.push_back(expo(gen));
    total += tuple.weights.back();
  }
  for (double& w : tuple.weights) w /= total;
  return tuple;
}

// One probe evaluation: lhs - rhs with the convention that a chart exit is
// signalled as NaN.
double probe_tuple(const Group& G, const Seminorm& u, const Tuple& tuple, double c) {
  Elem prod = G.identity();
  double rhs = 0.0;
  try {
    for (std::size_t i = 0; i < tuple.directions.size(); ++i) {
      // o = c * u and o(X_i) = w_i, so X_i = (w_i / c) * direction.
      Eigen::VectorXd X = (tuple.weights[i] / c) * tuple.directions[i];
      prod = G.mult(G.unchart(X), prod);
      rhs += tuple.weights[i];
    }
    if (!G.in_chart(prod)) return std::numeric_limits<double>::quiet_NaN();
    return u(G.chart(prod)) - rhs;
  } catch (const OutOfChartError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<Tuple> sample_tuples(const Group& G, const Seminorm& u, int n_max,
                                 long samples, unsigned long seed) {
  std::vector<Tuple> tuples(samples);
  par::for_each(samples, [&](long i) {
    std::mt19937_64 gen(seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    tuples[i] = sample_tuple(G, u, n_max, gen);
  });
  return tuples;
}

ProbeReport evaluate_probe(const Group& G, const Seminorm& u,
                           const std::vector<Tuple>& tuples, double c,
                           const std::string& candidate) {
  ProbeReport report;
  report.samples = static_cast<long>(tuples.size());
  report.slack_tolerance = 1e-9;
  report.candidate = candidate;

  std::vector<double> values(tuples.size());
  par::for_each(static_cast<long>(tuples.size()),
                [&](long i) { values[i] = probe_tuple(G, u, tuples[i], c); });

  report.max_violation = -std::numeric_limits<double>::infinity();
  long worst = -1;
  for (long i = 0; i < report.samples; ++i) {
    if (std::isnan(values[i])) {
      ++report.chart_exits;
      continue;
    }
    if (values[i] > report.max_violation) {
      report.max_violation = values[i];
      worst = i;
    }
  }
  if (worst >= 0) {
    for (std::size_t i = 0; i < tuples[worst].directions.size(); ++i)
      report.witness.push_back(
          (tuples[worst].weights[i] / c) * tuples[worst].directions[i]);
  } else {
    report.max_violation = 0.0;
  }
  return report;
}

}  // namespace

ProbeReport mu_convex_probe(const GroupPtr& G, const Seminorm& u, const Seminorm& o,
                            int n_max, long samples, unsigned long seed) {
  // Sampling on the o-sphere with Dirichlet magnitudes makes the weights the
  // o-sizes of the tuple entries, so probing reduces to c = 1.
  std::vector<Tuple> tuples = sample_tuples(*G, o, n_max, samples, seed);
  return evaluate_probe(*G, u, tuples, 1.0, "o = " + o.name);
}

std::pair<double, ProbeReport> find_o(const GroupPtr& G, const Seminorm& u, int n_max,
                                      long samples, unsigned long seed,
                                      double c_hi_start) {
  std::vector<Tuple> tuples = sample_tuples(*G, u, n_max, samples, seed);
  auto passes = [&](double c) {
    return evaluate_probe(*G, u, tuples, c, "").max_violation <= 1e-9;
  };

  double hi = c_hi_start;
  int expansions = 0;
  while (!passes(hi)) {
    hi *= 2.0;
    if (++expansions > 20)
      throw std::runtime_error("find_o: no passing multiple of u found");
  }
  double lo = hi / 2.0;
  if (passes(lo) || lo < 1e-6) lo = std::min(lo, 1e-6);
  // Shrink a definite bracket first, then bisect to relative width 1e-2.
  while (lo > 1e-6 && passes(lo)) {
    hi = lo;
    lo /= 2.0;
  }
  while ((hi - lo) / hi > 1e-2) {
    double mid = 0.5 * (lo + hi);
    (passes(mid) ? hi : lo) = mid;
  }
  ProbeReport report = evaluate_probe(*G, u, tuples, hi, "o = " + std::to_string(hi) +
                                                             " * " + u.name);
  return {hi, report};
}

ProbeReport continuity_bound_check(const GroupPtr& G, const Seminorm& p,
                                   const Seminorm& q, const std::vector<Curve>& phis,
                                   const EvolveConfig& cfg, int grid) {
  ProbeReport report;
  report.slack_tolerance = 1e-6;
  report.candidate = "p = " + p.name + ", q = " + q.name;
  report.max_violation = -std::numeric_limits<double>::infinity();

  for (const Curve& phi_raw : phis) {
    Antiderivative raw_len(
        [&](double t) {
          Eigen::VectorXd v(1);
          v(0) = q(phi_raw(t));
          return v;
        },
        phi_raw.lo(), phi_raw.hi());
    double total = raw_len.total()(0);
    double scale = total > 1.0 ? (1.0 - 1e-9) / total : 1.0;
    Curve phi = phi_raw.scaled(scale);

    EvolutionResult ev = evolve(G, phi, cfg);
    Antiderivative len(
        [&](double t) {
          Eigen::VectorXd v(1);
          v(0) = q(phi(t));
          return v;
        },
        phi.lo(), phi.hi());

    for (int i = 0; i < grid; ++i) {
      double t = phi.lo() + phi.length() * double(i) / double(grid - 1);
      ++report.samples;
      Elem g = ev(t);
      if (!G->in_chart(g)) {
        ++report.chart_exits;
        continue;
      }
      double violation = p(G->chart(g)) - len(t)(0);
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.witness_time = t;
      }
    }
  }
  if (report.samples == report.chart_exits) report.max_violation = 0.0;
  return report;
}

L1ContinuityReport l1_continuity_check(const GroupPtr& G, const Seminorm& q,
                                       const Curve& phi_raw, const EvolveConfig& cfg) {
  // Scale so the q-arclength is below one, then equalize it onto [0, 2].
  Antiderivative raw_len(
      [&](double t) {
        Eigen::VectorXd v(1);
        v(0) = q(phi_raw(t));
        return v;
      },
      phi_raw.lo(), phi_raw.hi());
  double total = raw_len.total()(0);
  double scale = total > 1.0 ? (1.0 - 1e-9) / total : 1.0;
  Curve phi = phi_raw.scaled(scale);

  auto len = std::make_shared<Antiderivative>(
      [phi, q](double t) {
        Eigen::VectorXd v(1);
        v(0) = q(phi(t));
        return v;
      },
      phi.lo(), phi.hi());
  double Q = len->total()(0);
  double lo = phi.lo(), L = phi.length();

  auto lambda = [len, lo, L, Q](double t) {
    return (t - lo) / L * (2.0 - Q) + (*len)(t)(0);
  };
  auto lambda_dot = [phi, q, L, Q](double t) { return (2.0 - Q) / L + q(phi(t)); };
  auto rho_of = [lambda, lo, L](double tau) {
    double a = lo, b = lo + L;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (a + b);
      (lambda(mid) < tau ? a : b) = mid;
    }
    return 0.5 * (a + b);
  };

  Curve substitute(0.0, 2.0, phi.dim(), 0, [phi, rho_of, lambda_dot](double tau, int) {
    double t = rho_of(tau);
    return (phi(t) / lambda_dot(t)).eval();
  });

  EvolutionResult direct = evolve(G, phi, cfg);
  EvolutionResult repar = evolve(G, substitute, cfg);

  L1ContinuityReport report;
  report.endpoint_distance =
      chart_distance(*G, direct.endpoint(), repar.endpoint()).value;
  report.error_budget = direct.error_estimate() + repar.error_estimate();
  for (int i = 0; i <= 256; ++i)
    report.substitute_sup =
        std::max(report.substitute_sup, q(substitute(2.0 * double(i) / 256.0)));
  report.ok = report.endpoint_distance <= 5 * report.error_budget + 1e-12 &&
              report.substitute_sup <= 1.0 + 1e-9;
  return report;
}

double scalar_product_inequality_max_slack(long samples, int n_max, unsigned long seed) {
  std::vector<double> slack(samples);
  par::for_each(samples, [&](long i) {
    std::mt19937_64 gen(seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    std::uniform_int_distribution<int> len(1, n_max);
    std::exponential_distribution<double> expo(1.0);
    std::uniform_real_distribution<double> budget(0.0, 0.5);
    int n = len(gen);
    std::vector<double> eps(n);
    double total = 0.0;
    for (double& e : eps) {
      e = expo(gen);
      total += e;
    }
    double b = budget(gen);
    double prod = 1.0, sum = 0.0;
    for (double& e : eps) {
      e *= b / total;
      prod *= 1.0 + e;
      sum += e;
    }
    slack[i] = (prod - 1.0) - 2.0 * sum;
  });
  double worst = -std::numeric_limits<double>::infinity();
  for (double s : slack) worst = std::max(worst, s);
  return worst;
}

}  // namespace prodint
