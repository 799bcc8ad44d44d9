#include "prodint/adjoint.hpp"

#include <cmath>

#include "prodint/parallel.hpp"
#include "prodint/quadrature.hpp"

namespace prodint {

namespace {

AdSeriesResult bracket_series(const Group& G, const Eigen::VectorXd& X,
                              const Eigen::VectorXd& first_term,
                              const std::function<double(int)>& coefficient) {
  // Accumulates sum_n coefficient(n) ad_X^n(first_term-direction); the caller
  // encodes t^n/n! or 1/(n+1)! through the running coefficient ratio.
  AdSeriesResult out;
  Eigen::VectorXd term = first_term;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(first_term.size());
  double running_max = term.norm();
  for (int n = 0; n <= 200; ++n) {
    double cn = coefficient(n);
    sum += cn * term;
    running_max = std::max({running_max, sum.norm(), std::abs(cn) * term.norm()});
    Eigen::VectorXd next = G.bracket(X, term);
    double next_size = std::abs(coefficient(n + 1)) * next.norm();
    if (next_size == 0.0) {
      out.value = sum;
      out.terms_used = n + 1;
      out.truncation_bound = 0.0;
      out.nilpotent_exact = true;
      return out;
    }
    if (next_size < 1e-16 * std::max(running_max, 1e-300)) {
      out.value = sum;
      out.terms_used = n + 1;
      out.truncation_bound = next_size;
      return out;
    }
    term = next;
  }
  throw std::runtime_error(
      "bracket series did not converge within 200 terms; last term norm " +
      std::to_string(term.norm()) + ", accumulated norm " + std::to_string(running_max));
}

}  // namespace

AdSeriesResult ad_series(const Group& G, const Eigen::VectorXd& X,
                         const Eigen::VectorXd& Y, double t) {
  // coefficient(n) = t^n / n!
  std::vector<double> coeff{1.0};
  auto coefficient = [t, coeff](int n) mutable {
    while (static_cast<int>(coeff.size()) <= n)
      coeff.push_back(coeff.back() * t / double(coeff.size()));
    return coeff[n];
  };
  return bracket_series(G, X, Y, coefficient);
}

AdSeriesResult dexp_factor(const Group& G, const Eigen::VectorXd& X,
                           const Eigen::VectorXd& Z) {
  // coefficient(n) = 1 / (n+1)! applied to (-ad_X)^n(Z).
  std::vector<double> coeff{1.0};
  auto coefficient = [coeff](int n) mutable {
    while (static_cast<int>(coeff.size()) <= n)
      coeff.push_back(coeff.back() / double(coeff.size() + 1));
    return coeff[n];
  };
  return bracket_series(G, (-X).eval(), Z, coefficient);
}

OmoriResult omori_transport(const GroupPtr& G, const Curve& phi,
                            const Eigen::VectorXd& Y, const EvolveConfig& cfg) {
  EvolutionResult ev = evolve(G, phi, cfg);
  const auto& ts = ev.node_times();
  const long n = static_cast<long>(ts.size()) - 1;

  // Classical explicit stepping matched to the scheme, on the evolution's
  // node grid and once more at double spacing for a Richardson estimate of
  // the transport's own error.
  auto sweep = [&](long stride) {
    std::vector<Eigen::VectorXd> alpha;
    alpha.push_back(Y);
    for (long k = 0; k + stride <= n; k += stride) {
      double h = ts[k + stride] - ts[k];
      const Eigen::VectorXd& a = alpha.back();
      if (cfg.scheme == Scheme::lie_euler) {
        alpha.push_back(a + h * G->bracket(phi(ts[k]), a));
      } else {
        Eigen::VectorXd half = a + 0.5 * h * G->bracket(phi(ts[k]), a);
        alpha.push_back(a + h * G->bracket(phi(ts[k] + 0.5 * h), half));
      }
    }
    return alpha;
  };
  std::vector<Eigen::VectorXd> alpha = sweep(1);
  std::vector<Eigen::VectorXd> coarse = sweep(2);

  double denom = std::pow(2.0, scheme_order(cfg.scheme)) - 1.0;
  double ode_estimate = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k)
    if (2 * k < alpha.size())
      ode_estimate =
          std::max(ode_estimate, (coarse[k] - alpha[2 * k]).norm() / denom);

  double residual = par::max_reduce(n + 1, [&](long k) {
    return (alpha[k] - G->Ad(ev(ts[k]), Y)).norm();
  });

  auto values = std::make_shared<std::vector<Eigen::VectorXd>>(std::move(alpha));
  auto times = std::make_shared<std::vector<double>>(ts);
  const Group* Gp = G.get();
  Curve curve(phi.lo(), phi.hi(), G->dim(), 1,
              [values, times, Gp, phi](double t, int s) -> Eigen::VectorXd {
                auto it = std::upper_bound(times->begin(), times->end(), t);
                std::size_t k =
                    it == times->begin() ? 0 : static_cast<std::size_t>(it - times->begin()) - 1;
                k = std::min(k, values->size() - 1);
                Eigen::VectorXd a;
                if (k + 1 >= values->size()) {
                  a = (*values)[k];
                } else {
                  double u = (t - (*times)[k]) / ((*times)[k + 1] - (*times)[k]);
                  a = (1.0 - u) * (*values)[k] + u * (*values)[k + 1];
                }
                if (s == 0) return a;
                return Gp->bracket(phi(t), a);
              });
  return {std::move(curve), residual, ev.error_estimate() + ode_estimate};
}

GroenwallReport groenwall_check(const GroupPtr& G, const Curve& phi,
                                const Eigen::VectorXd& Y, const Seminorm& w,
                                const EvolveConfig& cfg, int grid) {
  // The bound only makes sense for a bracket-submultiplicative seminorm;
  // sample the hypothesis before trusting it.
  std::mt19937_64 gen(0x5eed);
  for (int i = 0; i < 64; ++i) {
    Eigen::VectorXd A = G->random_algebra(gen, 2.0);
    Eigen::VectorXd B = G->random_algebra(gen, 2.0);
    if (w(G->bracket(A, B)) > w(A) * w(B) + 1e-12)
      throw std::invalid_argument(
          "groenwall_check: seminorm is not submultiplicative on samples");
  }

  EvolutionResult ev = evolve(G, phi, cfg);
  Antiderivative wphi(
      [&](double t) {
        Eigen::VectorXd v(1);
        v(0) = w(phi(t));
        return v;
      },
      phi.lo(), phi.hi());

  GroenwallReport report;
  report.grid = grid;
  report.slack.resize(grid);
  double wY = w(Y);
  for (int i = 0; i < grid; ++i) {
    double t = phi.lo() + phi.length() * double(i) / double(grid - 1);
    double lhs = w(G->Ad(ev(t), Y));
    double rhs = std::exp(wphi(t)(0)) * wY + 1e-8;
    report.slack[i] = rhs - lhs;
  }
  report.min_slack = *std::min_element(report.slack.begin(), report.slack.end());
  report.max_violation = std::max(0.0, -report.min_slack);
  report.holds = report.min_slack >= 0.0;
  return report;
}

double power_iteration_norm(const Eigen::MatrixXd& M, double tol) {
  const int d = static_cast<int>(M.cols());
  Eigen::MatrixXd S = M.transpose() * M;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(d).normalized();
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd w = S * v;
    double norm = w.norm();
    if (norm < 1e-300) return 0.0;
    v = w / norm;
    lambda = v.dot(S * v);
    if ((S * v - lambda * v).norm() <= tol * std::max(lambda, 1e-300)) break;
    if (it == 256) {
      // A deflated start direction breaks symmetry if the first one was
      // orthogonal to the dominant eigenvector.
      v(0) += 0.5;
      v.normalize();
    }
  }
  return std::sqrt(std::max(0.0, lambda));
}

ConstrictedReport constricted_probe(const GroupPtr& G, int n_max, int samples,
                                    unsigned long seed, double radius) {
  ConstrictedReport report;
  report.samples = samples;
  report.n_max = n_max;
  const int d = G->dim();

  std::vector<double> ratios(samples, 0.0);
  std::vector<std::vector<Eigen::VectorXd>> tuples(samples);
  par::for_each(samples, [&](long i) {
    std::mt19937_64 gen(seed + 0x9e3779b97f4a7c15ULL * (i + 1));
    std::uniform_int_distribution<int> len(1, n_max);
    int n = len(gen);
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(d, d);
    std::vector<Eigen::VectorXd> tuple;
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd X = G->random_algebra(gen, radius);
      tuple.push_back(X);
      M = (G->ad_matrix(X) * M).eval();
    }
    ratios[i] = std::pow(power_iteration_norm(M), 1.0 / double(n));
    tuples[i] = std::move(tuple);
  });

  for (int i = 0; i < samples; ++i) {
    if (ratios[i] >= report.C) {
      report.C = ratios[i];
      report.witness = tuples[i];
    }
  }
  return report;
}

}  // namespace prodint
