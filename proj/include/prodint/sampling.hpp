#pragma once

#include <random>

#include "prodint/curve.hpp"
#include "prodint/logderiv.hpp"

namespace prodint::sampling {

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& gen, int dim, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = scale * dist(gen);
  return v;
}

// Trigonometric polynomial with decaying random harmonics; analytic
// derivatives of every order.
inline Curve fourier_curve(std::mt19937_64& gen, int dim, int harmonics, double lo,
                           double hi, double amplitude = 1.0) {
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> h;
  for (int j = 1; j <= harmonics; ++j)
    h.emplace_back(gaussian_vector(gen, dim, amplitude / double(j * j)),
                   gaussian_vector(gen, dim, amplitude / double(j * j)));
  return Curve::fourier(gaussian_vector(gen, dim, amplitude), std::move(h), lo, hi);
}

inline Curve polynomial_curve(std::mt19937_64& gen, int dim, int degree, double lo,
                              double hi, double amplitude = 1.0) {
  std::vector<Eigen::VectorXd> coeffs;
  for (int k = 0; k <= degree; ++k)
    coeffs.push_back(gaussian_vector(gen, dim, amplitude / double(k + 1)));
  return Curve::polynomial(std::move(coeffs), lo, hi);
}

// Smooth strictly increasing self-map of [lo, hi] fixing the endpoints.
inline Curve reparam_curve(std::mt19937_64& gen, double lo, double hi) {
  std::uniform_real_distribution<double> amp(-0.12, 0.12);
  double a1 = amp(gen), a2 = 0.5 * amp(gen);
  double len = hi - lo;
  return Curve(lo, hi, 1, kOrderSmooth, [lo, len, a1, a2](double t, int s) {
    double u = (t - lo) / len;
    double w1 = 2.0 * M_PI, w2 = 4.0 * M_PI;
    Eigen::VectorXd v(1);
    if (s == 0) {
      v(0) = lo + len * (u + a1 * std::sin(w1 * u) / w1 + a2 * std::sin(w2 * u) / w2);
    } else {
      double scale = std::pow(1.0 / len, s - 1);
      double p1 = w1 * u + 0.5 * M_PI * (s - 1);
      double p2 = w2 * u + 0.5 * M_PI * (s - 1);
      double base = (s == 1) ? 1.0 : 0.0;
      v(0) = scale * (base + a1 * std::pow(w1, s - 1) * std::cos(p1) +
                      a2 * std::pow(w2, s - 1) * std::cos(p2));
    }
    return v;
  });
}

// Product of two one-parameter subgroups driven by random analytic clocks;
// carries exact ambient derivatives.
inline GroupCurve analytic_group_curve(std::mt19937_64& gen, const GroupPtr& G,
                                       double lo, double hi, double scale = 0.8) {
  Eigen::VectorXd X1 = G->random_algebra(gen, scale);
  Eigen::VectorXd X2 = G->random_algebra(gen, scale);
  Curve f1 = fourier_curve(gen, 1, 2, lo, hi, 0.7);
  Curve f2 = fourier_curve(gen, 1, 2, lo, hi, 0.7);
  return GroupCurve::one_parameter(G, X1, f1).mult(GroupCurve::one_parameter(G, X2, f2));
}

}  // namespace prodint::sampling
