#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace prodint {

// Truncated Taylor expansion of a scalar function at a point: coeffs_[k] is
// f^(k)(t0)/k!. Arithmetic propagates expansions through composite formulas,
// which is how the bump profiles expose derivatives of arbitrary order.
class Jet {
 public:
  Jet() = default;
  Jet(double value, std::size_t order) : c_(order + 1, 0.0) { c_[0] = value; }

  // The expansion of the identity map t -> t around t0.
  static Jet variable(double t0, std::size_t order) {
    Jet j(t0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  double value() const { return c_[0]; }
  double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
  double& coeff(std::size_t k) { return c_[k]; }

  // Raw derivative f^(s)(t0) = s! * coeff(s).
  double derivative(std::size_t s) const {
    double f = 1.0;
    for (std::size_t k = 2; k <= s; ++k) f *= static_cast<double>(k);
    return f * coeff(s);
  }

  Jet operator-() const {
    Jet r = *this;
    for (double& x : r.c_) x = -x;
    return r;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r = a;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += b.coeff(k);
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.c_[0] += s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, double s) {
    Jet r = a;
    for (double& x : r.c_) x *= s;
    return r;
  }
  friend Jet operator*(double s, const Jet& a) { return a * s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(0.0, a.order());
    for (std::size_t k = 0; k < r.c_.size(); ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.coeff(j) * b.coeff(k - j);
      r.c_[k] = s;
    }
    return r;
  }

  // 1/b, requires b(t0) != 0.
  friend Jet reciprocal(const Jet& b) {
    Jet r(1.0 / b.coeff(0), b.order());
    for (std::size_t k = 1; k <= b.order(); ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j) s += b.coeff(j) * r.coeff(k - j);
      r.c_[k] = -s / b.coeff(0);
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return reciprocal(b) * s; }
  friend Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }

  friend Jet exp(const Jet& a) {
    Jet r(std::exp(a.coeff(0)), a.order());
    // e' = a' e gives k e_k = sum_{j=1..k} j a_j e_{k-j}.
    for (std::size_t k = 1; k <= a.order(); ++k) {
      double s = 0.0;
      for (std::size_t j = 1; j <= k; ++j)
        s += static_cast<double>(j) * a.coeff(j) * r.coeff(k - j);
      r.c_[k] = s / static_cast<double>(k);
    }
    return r;
  }

  // g composed after f, where g is expanded at f.value(). Substitutes the
  // zero-constant part of f into g's expansion by Horner evaluation.
  friend Jet compose(const Jet& g, const Jet& f) {
    assert(g.order() == f.order());
    Jet df = f;
    df.c_[0] = 0.0;
    Jet r(0.0, f.order());
    for (std::size_t k = g.order() + 1; k-- > 0;) {
      r = r * df;
      r.c_[0] += g.coeff(k);
    }
    return r;
  }

 private:
  std::vector<double> c_;
};

}  // namespace prodint
