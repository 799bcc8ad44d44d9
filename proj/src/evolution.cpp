#include "prodint/evolution.hpp"

#include <cmath>

#include "prodint/parallel.hpp"

namespace prodint {

std::string scheme_name(Scheme s) {
  return s == Scheme::lie_euler ? "lie_euler" : "midpoint";
}
int scheme_order(Scheme s) { return s == Scheme::lie_euler ? 1 : 2; }

namespace {

using PhiFn = std::function<Eigen::VectorXd(double)>;

// One full sweep at a fixed step per piece. Segment boundaries are always
// nodes, so the generator is never sampled across a breakpoint.
void run_scheme(const Group& G, const PhiFn& phi, const std::vector<double>& pieces,
                Scheme scheme, double step, long max_steps, std::vector<double>& ts,
                std::vector<Elem>& mus) {
  ts.assign(1, pieces.front());
  mus.assign(1, G.identity());
  for (std::size_t p = 0; p + 1 < pieces.size(); ++p) {
    double len = pieces[p + 1] - pieces[p];
    long n = std::max(1L, std::lround(std::ceil(len / step - 1e-12)));
    if (static_cast<long>(ts.size()) + n > max_steps)
      throw std::runtime_error("evolve: step budget exceeded");
    double h = len / double(n);
    for (long k = 0; k < n; ++k) {
      double tk = pieces[p] + h * double(k);
      double te = scheme == Scheme::lie_euler ? tk : tk + 0.5 * h;
      Elem g = G.exp((h * phi(te)).eval());
      mus.push_back(G.mult(g, mus.back()));
      if (!mus.back().allFinite())
        throw std::runtime_error("evolve: exponential left the numerical range near t = " +
                                 std::to_string(tk));
      ts.push_back(k + 1 == n ? pieces[p + 1] : tk + h);
    }
  }
}

}  // namespace

EvolutionResult EvolutionResult::run(const GroupPtr& G,
                                     std::function<Eigen::VectorXd(double)> phi,
                                     const std::vector<double>& pieces,
                                     const EvolveConfig& cfg) {
  EvolutionResult out;
  out.G_ = G;
  out.scheme_ = cfg.scheme;
  out.phi_ = phi;

  const double denom = std::pow(2.0, scheme_order(cfg.scheme)) - 1.0;
  double step = cfg.step;
  std::vector<double> ts_c;
  std::vector<Elem> mus_c;
  run_scheme(*G, phi, pieces, cfg.scheme, step, cfg.max_steps, ts_c, mus_c);

  for (int round = 0;; ++round) {
    std::vector<double> ts_f;
    std::vector<Elem> mus_f;
    run_scheme(*G, phi, pieces, cfg.scheme, step / 2.0, cfg.max_steps, ts_f, mus_f);

    Elem rel = G->mult(G->inv(mus_f.back()), mus_c.back());
    Eigen::VectorXd delta;
    bool ok = G->in_chart(rel);
    if (ok) delta = G->chart(rel);
    double est = ok ? delta.norm() / denom
                    : (mus_f.back() - mus_c.back()).norm() / denom;

    bool done = cfg.target_tolerance <= 0 || est <= cfg.target_tolerance ||
                round >= 24;
    if (done) {
      out.step_ = step / 2.0;
      out.ts_ = std::move(ts_f);
      out.mus_ = std::move(mus_f);
      out.est_ = est;
      if (ok) {
        for (const auto& sn : G->algebra().seminorms())
          out.est_sn_[sn.name] = sn(delta) / denom;
        out.refined_ = G->mult(out.mus_.back(), G->unchart((-delta / denom).eval()));
      } else {
        for (const auto& sn : G->algebra().seminorms()) out.est_sn_[sn.name] = est;
        out.refined_ = out.mus_.back();
      }
      return out;
    }
    step /= 2.0;
    ts_c = std::move(ts_f);
    mus_c = std::move(mus_f);
  }
}

Elem EvolutionResult::operator()(double t) const {
  auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
  std::size_t k = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin()) - 1;
  k = std::min(k, ts_.size() - 1);
  double dt = t - ts_[k];
  if (k + 1 == ts_.size() || dt <= 0) return mus_[k];
  double te = scheme_ == Scheme::lie_euler ? ts_[k] : ts_[k] + 0.5 * dt;
  return G_->mult(G_->exp((dt * phi_(te)).eval()), mus_[k]);
}

GroupCurve EvolutionResult::as_group_curve() const {
  EvolutionResult copy = *this;
  return GroupCurve(G_, lo(), hi(), 1, [copy](double t) { return copy(t); });
}

EvolutionResult evolve(const GroupPtr& G, const Curve& phi, const EvolveConfig& cfg) {
  if (phi.dim() != G->dim())
    throw std::invalid_argument("evolve: curve dimension does not match the algebra");
  return EvolutionResult::run(G, [phi](double t) { return phi(t); },
                              {phi.lo(), phi.hi()}, cfg);
}

EvolutionResult evolve_piecewise(const GroupPtr& G, const PiecewiseCurve& pw,
                                 const EvolveConfig& cfg) {
  if (pw.dim() != G->dim())
    throw std::invalid_argument("evolve_piecewise: dimension mismatch");
  return EvolutionResult::run(G, [pw](double t) { return pw(t); }, pw.breakpoints(), cfg);
}

double reconstruct_residual(const GroupPtr& G, const Curve& phi, const EvolveConfig& cfg) {
  EvolutionResult ev = evolve(G, phi, cfg);
  const auto& ts = ev.node_times();
  const auto& mus = ev.node_values();
  long n = static_cast<long>(ts.size());
  if (n < 6) return 0.0;
  double h = ts[1] - ts[0];
  return par::max_reduce(n - 4, [&](long i) {
    long k = i + 2;
    Elem inv_here = G->inv(mus[k]);
    auto f = [&](long m) { return G->chart(G->mult(mus[m], inv_here)); };
    Eigen::VectorXd d =
        (f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2)) / (12.0 * h);
    return (d - phi(ts[k])).norm();
  });
}

IdentityResidual concat_residual(const GroupPtr& G, const Curve& phi,
                                 const std::vector<double>& interior_breakpoints,
                                 const EvolveConfig& cfg) {
  EvolutionResult whole = evolve(G, phi, cfg);

  std::vector<double> bp{phi.lo()};
  for (double b : interior_breakpoints)
    if (b > bp.back() && b < phi.hi()) bp.push_back(b);
  bp.push_back(phi.hi());
  Elem acc = G->identity();
  double budget = whole.error_estimate();
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    EvolutionResult seg = evolve(G, phi.restricted(bp[p], bp[p + 1]), cfg);
    acc = G->mult(seg.endpoint(), acc);
    budget += seg.error_estimate();
  }
  return {chart_distance(*G, whole.endpoint(), acc).value, budget};
}

Curve reverse(const Curve& phi) {
  double lo = phi.lo(), hi = phi.hi();
  return Curve(lo, hi, phi.dim(), phi.order(), [phi, lo, hi](double t, int s) {
    double sign = s % 2 == 0 ? -1.0 : 1.0;
    return (sign * phi.eval(lo + hi - t, s)).eval();
  });
}

IdentityResidual reverse_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const EvolveConfig& cfg) {
  EvolutionResult fwd = evolve(G, phi, cfg);
  EvolutionResult bwd = evolve(G, reverse(phi), cfg);
  Elem prod = G->mult(bwd.endpoint(), fwd.endpoint());
  return {chart_distance(*G, G->identity(), prod).value,
          fwd.error_estimate() + bwd.error_estimate()};
}

IdentityResidual substitution_check(const GroupPtr& G, const Curve& phi,
                                    const Curve& rho, const EvolveConfig& cfg) {
  EvolutionResult direct = evolve(G, phi, cfg);
  int d = phi.dim();
  Curve transported(rho.lo(), rho.hi(), d, 0, [phi, rho](double t, int) {
    return (rho.eval(t, 1)(0) * phi(std::clamp(rho(t)(0), phi.lo(), phi.hi()))).eval();
  });
  EvolutionResult sub = evolve(G, transported, cfg);
  return {chart_distance(*G, direct.endpoint(), sub.endpoint()).value,
          direct.error_estimate() + sub.error_estimate()};
}

namespace {

double grid_distance(const Group& G, const std::function<Elem(double)>& a,
                     const std::function<Elem(double)>& b, double lo, double hi,
                     int grid) {
  return par::max_reduce(grid, [&](long i) {
    double t = lo + (hi - lo) * double(i) / double(grid - 1);
    return chart_distance(G, a(t), b(t)).value;
  });
}

}  // namespace

IdentityResidual product_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const Curve& psi, const EvolveConfig& cfg,
                                           int grid) {
  EvolutionResult evp = evolve(G, phi, cfg);
  EvolutionResult evq = evolve(G, psi, cfg);
  Curve transported(phi.lo(), phi.hi(), phi.dim(), 0, [G, evp, psi, phi](double t, int) {
    return (phi(t) + G->Ad(evp(t), psi(t))).eval();
  });
  EvolutionResult evr = evolve(G, transported, cfg);
  double res = grid_distance(
      *G, [&](double t) { return G->mult(evp(t), evq(t)); },
      [&](double t) { return evr(t); }, phi.lo(), phi.hi(), grid);
  return {res, evp.error_estimate() + evq.error_estimate() + evr.error_estimate()};
}

IdentityResidual quotient_identity_residual(const GroupPtr& G, const Curve& phi,
                                            const Curve& psi, const EvolveConfig& cfg,
                                            int grid) {
  EvolutionResult evp = evolve(G, phi, cfg);
  EvolutionResult evq = evolve(G, psi, cfg);
  Curve transported(phi.lo(), phi.hi(), phi.dim(), 0, [G, evp, psi, phi](double t, int) {
    return G->Ad(G->inv(evp(t)), (psi(t) - phi(t)).eval());
  });
  EvolutionResult evr = evolve(G, transported, cfg);
  double res = grid_distance(
      *G, [&](double t) { return G->mult(G->inv(evp(t)), evq(t)); },
      [&](double t) { return evr(t); }, phi.lo(), phi.hi(), grid);
  return {res, evp.error_estimate() + evq.error_estimate() + evr.error_estimate()};
}

IdentityResidual inverse_identity_residual(const GroupPtr& G, const Curve& phi,
                                           const EvolveConfig& cfg, int grid) {
  EvolutionResult evp = evolve(G, phi, cfg);
  Curve transported(phi.lo(), phi.hi(), phi.dim(), 0, [G, evp, phi](double t, int) {
    return (-G->Ad(G->inv(evp(t)), phi(t))).eval();
  });
  EvolutionResult evr = evolve(G, transported, cfg);
  double res = grid_distance(
      *G, [&](double t) { return G->inv(evp(t)); }, [&](double t) { return evr(t); },
      phi.lo(), phi.hi(), grid);
  return {res, 2 * evp.error_estimate() + evr.error_estimate()};
}

Homomorphism identity_homomorphism(const GroupPtr& G) {
  return {"identity", G, G, [](const Elem& g) { return g; },
          Eigen::MatrixXd::Identity(G->dim(), G->dim())};
}

Homomorphism su2_so3_homomorphism() {
  return {"su2->so3", make_group("su2"), make_group("so3"),
          [](const Elem& q) -> Elem { return su2_to_so3(q); },
          Eigen::MatrixXd::Identity(3, 3)};
}

Homomorphism line_to_torus_homomorphism(int d) {
  GroupPtr T = make_group("torus", d);
  return {"line->torus", make_group("abelian", d), T,
          [T](const Elem& v) { return T->exp(v.col(0)); },
          Eigen::MatrixXd::Identity(d, d)};
}

IdentityResidual hom_transport_residual(const Curve& phi, const Homomorphism& hom,
                                        const EvolveConfig& cfg, int grid) {
  EvolutionResult up = evolve(hom.domain, phi, cfg);
  Eigen::MatrixXd dpsi = hom.tangent;
  Curve pushed(phi.lo(), phi.hi(), hom.codomain->dim(), 0,
               [phi, dpsi](double t, int) { return (dpsi * phi(t)).eval(); });
  EvolutionResult down = evolve(hom.codomain, pushed, cfg);
  double res = grid_distance(
      *hom.codomain, [&](double t) { return hom.map(up(t)); },
      [&](double t) { return down(t); }, phi.lo(), phi.hi(), grid);
  return {res, up.error_estimate() + down.error_estimate()};
}

}  // namespace prodint
