#include "prodint/group.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace prodint {

namespace {
constexpr double kDetFloor = 1e-12;
}

// ---------------------------------------------------------------------------
// Matrix utilities
// ---------------------------------------------------------------------------

double operator_norm(const Eigen::MatrixXd& A) {
  if (A.rows() == 1 || A.cols() == 1) return A.norm();
  return A.jacobiSvd().singularValues()(0);
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  double norm = operator_norm(A);
  int squarings = 0;
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXd B = A / std::pow(2.0, squarings);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (term * B / double(k)).eval();
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = (sum * sum).eval();
  return sum;
}

namespace {

// Principal square root by the Denman-Beavers iteration.
Eigen::MatrixXd matrix_sqrt(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd Y = A, Z = Eigen::MatrixXd::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    Eigen::FullPivLU<Eigen::MatrixXd> luY(Y), luZ(Z);
    if (!luY.isInvertible() || !luZ.isInvertible())
      throw OutOfChartError("matrix_log: square root iteration hit a singular iterate");
    Eigen::MatrixXd Yn = 0.5 * (Y + luZ.inverse());
    Eigen::MatrixXd Zn = 0.5 * (Z + luY.inverse());
    double delta = operator_norm(Yn - Y);
    Y = Yn;
    Z = Zn;
    if (!Y.allFinite()) throw OutOfChartError("matrix_log: square root diverged");
    if (delta < 1e-15 * std::max(1.0, operator_norm(Y))) return Y;
  }
  throw OutOfChartError("matrix_log: square root iteration did not converge");
}

}  // namespace

Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd B = A;
  int halvings = 0;
  while (operator_norm(B - I) >= 0.5) {
    B = matrix_sqrt(B);
    if (++halvings > 64)
      throw OutOfChartError("matrix_log: argument is off the principal branch");
  }
  Eigen::MatrixXd M = B - I;
  Eigen::MatrixXd power = M;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= 64; ++k) {
    sum += (k % 2 == 1 ? 1.0 : -1.0) / double(k) * power;
    power = (power * M).eval();
  }
  return std::pow(2.0, halvings) * sum;
}

// ---------------------------------------------------------------------------
// Group base helpers
// ---------------------------------------------------------------------------

bool Group::element_ok(const Elem& g) const { return g.allFinite(); }

Eigen::MatrixXd Group::Ad_matrix(const Elem& g) const {
  const int d = dim();
  Eigen::MatrixXd M(d, d);
  for (int j = 0; j < d; ++j)
    M.col(j) = Ad(g, Eigen::VectorXd::Unit(d, j));
  return M;
}

Eigen::MatrixXd Group::ad_matrix(const Eigen::VectorXd& X) const {
  const int d = dim();
  Eigen::MatrixXd M(d, d);
  for (int j = 0; j < d; ++j)
    M.col(j) = bracket(X, Eigen::VectorXd::Unit(d, j));
  return M;
}

Eigen::VectorXd Group::random_algebra(std::mt19937_64& gen, double radius) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Eigen::VectorXd X(dim());
  for (int i = 0; i < dim(); ++i) X(i) = normal(gen);
  double n = X.norm();
  if (n < 1e-300) return Eigen::VectorXd::Zero(dim());
  return (radius * uni(gen) / n) * X;
}

Elem Group::random_near_identity(std::mt19937_64& gen, double radius) const {
  return unchart(random_algebra(gen, std::min(radius, 0.9 * chart_radius())));
}

Eigen::MatrixXd ad_operator(const Group& G, const Eigen::VectorXd& X) {
  return G.ad_matrix(X);
}

ChartDistance chart_distance(const Group& G, const Elem& g, const Elem& h,
                             const Seminorm& p) {
  Elem rel = G.mult(G.inv(g), h);
  ChartDistance out;
  if (G.in_chart(rel)) {
    out.value = p(G.chart(rel));
    out.in_chart = true;
  } else {
    out.value = (h - g).norm();
    out.in_chart = false;
  }
  return out;
}

ChartDistance chart_distance(const Group& G, const Elem& g, const Elem& h) {
  return chart_distance(G, g, h, euclid_seminorm());
}

// ---------------------------------------------------------------------------
// Vector groups: abelian(d) and torus(d)
// ---------------------------------------------------------------------------

namespace {

VectorSpec vector_algebra(int d) {
  return VectorSpec(d, {euclid_seminorm(), sup_seminorm()}, {{"sup", "euclid"}});
}

class AbelianGroup final : public Group {
 public:
  explicit AbelianGroup(int d)
      : Group("abelian(" + std::to_string(d) + ")", vector_algebra(d),
              /*abelian=*/true, /*nilpotent=*/true, "euclid", /*chart_is_exp=*/true),
        d_(d) {}

  Elem identity() const override { return Eigen::VectorXd::Zero(d_); }
  Elem mult(const Elem& a, const Elem& b) const override { return a + b; }
  Elem inv(const Elem& g) const override { return -g; }

  bool in_chart(const Elem&) const override { return true; }
  Eigen::VectorXd chart(const Elem& g) const override { return g.col(0); }
  Elem unchart(const Eigen::VectorXd& x) const override { return x; }
  double chart_radius() const override { return 1e9; }

  Elem exp(const Eigen::VectorXd& X) const override { return X; }
  Eigen::VectorXd log(const Elem& g) const override { return g.col(0); }

  Eigen::VectorXd Ad(const Elem&, const Eigen::VectorXd& X) const override { return X; }
  Eigen::VectorXd bracket(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
    return Eigen::VectorXd::Zero(d_);
  }

  Elem product_derivative(const Elem&, const Elem& da, const Elem&,
                          const Elem& db) const override {
    return da + db;
  }
  Elem inverse_derivative(const Elem&, const Elem& dg) const override { return -dg; }
  Elem one_param_derivative(const Eigen::VectorXd& X, double, double fdot) const override {
    return fdot * X;
  }
  Eigen::VectorXd der_from_ambient(const Elem&, const Elem& mudot) const override {
    return mudot.col(0);
  }

 private:
  int d_;
};

class TorusGroup final : public Group {
 public:
  explicit TorusGroup(int d)
      : Group("torus(" + std::to_string(d) + ")", vector_algebra(d),
              /*abelian=*/true, /*nilpotent=*/true, "euclid", /*chart_is_exp=*/true),
        d_(d) {}

  static Eigen::VectorXd wrap(Eigen::VectorXd x) {
    for (int i = 0; i < x.size(); ++i) {
      x(i) = std::remainder(x(i), 2.0 * M_PI);
      // remainder lands in [-pi, pi]; fold the boundary onto +pi.
      if (x(i) <= -M_PI) x(i) = M_PI;
    }
    return x;
  }

  Elem identity() const override { return Eigen::VectorXd::Zero(d_); }
  Elem mult(const Elem& a, const Elem& b) const override { return wrap(a + b); }
  Elem inv(const Elem& g) const override { return wrap(-g); }

  bool in_chart(const Elem& g) const override {
    return g.col(0).cwiseAbs().maxCoeff() < M_PI - 1e-12;
  }
  Eigen::VectorXd chart(const Elem& g) const override {
    if (!in_chart(g))
      throw OutOfChartError("torus: representative touches the chart boundary");
    return g.col(0);
  }
  Elem unchart(const Eigen::VectorXd& x) const override { return wrap(x); }
  double chart_radius() const override { return 3.0; }

  Elem exp(const Eigen::VectorXd& X) const override { return wrap(X); }
  Eigen::VectorXd log(const Elem& g) const override { return chart(g); }

  Eigen::VectorXd Ad(const Elem&, const Eigen::VectorXd& X) const override { return X; }
  Eigen::VectorXd bracket(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
    return Eigen::VectorXd::Zero(d_);
  }

  Elem product_derivative(const Elem&, const Elem& da, const Elem&,
                          const Elem& db) const override {
    return da + db;
  }
  Elem inverse_derivative(const Elem&, const Elem& dg) const override { return -dg; }
  Elem one_param_derivative(const Eigen::VectorXd& X, double, double fdot) const override {
    return fdot * X;
  }
  Eigen::VectorXd der_from_ambient(const Elem&, const Elem& mudot) const override {
    return mudot.col(0);
  }

 private:
  int d_;
};

// ---------------------------------------------------------------------------
// Matrix groups
// ---------------------------------------------------------------------------

class MatrixGroupBase : public Group {
 public:
  MatrixGroupBase(std::string name, VectorSpec algebra, int n, bool abelian,
                  bool nilpotent, std::string submult, bool chart_is_exp)
      : Group(std::move(name), std::move(algebra), abelian, nilpotent,
              std::move(submult), chart_is_exp),
        n_(n) {}

  int matrix_size() const { return n_; }
  virtual Eigen::MatrixXd alg_to_mat(const Eigen::VectorXd& X) const = 0;
  virtual Eigen::VectorXd mat_to_alg(const Eigen::MatrixXd& M) const = 0;

  Elem identity() const override { return Eigen::MatrixXd::Identity(n_, n_); }
  Elem mult(const Elem& a, const Elem& b) const override { return a * b; }
  Elem inv(const Elem& g) const override {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
    if (std::abs(lu.determinant()) <= kDetFloor)
      throw SingularElementError(name() + ": element is numerically singular");
    return lu.inverse();
  }

  Elem exp(const Eigen::VectorXd& X) const override {
    return matrix_exp(alg_to_mat(X));
  }
  Eigen::VectorXd log(const Elem& g) const override {
    return mat_to_alg(matrix_log(g));
  }

  bool in_chart(const Elem& g) const override {
    Eigen::EigenSolver<Eigen::MatrixXd> es(g, /*computeEigenvectors=*/false);
    for (int i = 0; i < g.rows(); ++i) {
      std::complex<double> ev = es.eigenvalues()(i);
      if (std::abs(ev) < kDetFloor) return false;
      if (ev.real() <= 0.0 && std::abs(ev.imag()) <= 1e-12 * std::abs(ev)) return false;
    }
    return true;
  }
  Eigen::VectorXd chart(const Elem& g) const override {
    if (!in_chart(g))
      throw OutOfChartError(name() + ": element is off the principal branch");
    return log(g);
  }
  Elem unchart(const Eigen::VectorXd& x) const override { return exp(x); }
  double chart_radius() const override { return 0.5; }

  Eigen::VectorXd Ad(const Elem& g, const Eigen::VectorXd& X) const override {
    return mat_to_alg(g * alg_to_mat(X) * inv(g));
  }
  Eigen::VectorXd bracket(const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y) const override {
    Eigen::MatrixXd A = alg_to_mat(X), B = alg_to_mat(Y);
    return mat_to_alg(A * B - B * A);
  }

  Elem product_derivative(const Elem& a, const Elem& da, const Elem& b,
                          const Elem& db) const override {
    return da * b + a * db;
  }
  Elem inverse_derivative(const Elem& g, const Elem& dg) const override {
    Elem gi = inv(g);
    return -gi * dg * gi;
  }
  Elem one_param_derivative(const Eigen::VectorXd& X, double f, double fdot) const override {
    return fdot * alg_to_mat(X) * exp((f * X).eval());
  }
  Eigen::VectorXd der_from_ambient(const Elem& mu, const Elem& mudot) const override {
    return mat_to_alg(mudot * inv(mu));
  }

  bool element_ok(const Elem& g) const override {
    return g.allFinite() && std::abs(g.determinant()) > kDetFloor;
  }

 protected:
  int n_;
};

Seminorm matrix_op_seminorm(const MatrixGroupBase* G, std::string name, double scale) {
  return {std::move(name), [G, scale](const Eigen::VectorXd& X) {
            return scale * operator_norm(G->alg_to_mat(X));
          }};
}

// so3: rotation matrices; algebra coordinates are axis-angle vectors mapped
// onto the standard hat matrices e1, e2, e3.
class So3Group final : public MatrixGroupBase {
 public:
  So3Group()
      : MatrixGroupBase("so3",
                        VectorSpec(3, {euclid_seminorm(), sup_seminorm()},
                                   {{"sup", "euclid"}}),
                        3, false, false, "euclid", true) {
    // The hat map is an isometry onto the operator norm, so "op" coincides
    // with "euclid"; registered separately for probing code that asks for it.
    replace_algebra(VectorSpec(3,
                               {euclid_seminorm(), sup_seminorm(),
                                matrix_op_seminorm(this, "op", 1.0)},
                               {{"sup", "euclid"}, {"op", "euclid"}}));
  }

  static Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
    Eigen::Matrix3d M;
    M << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
    return M;
  }

  Eigen::MatrixXd alg_to_mat(const Eigen::VectorXd& X) const override { return hat(X); }
  Eigen::VectorXd mat_to_alg(const Eigen::MatrixXd& M) const override {
    Eigen::Vector3d v;
    // Average the two skew slots; the ambient input may carry symmetric noise.
    v << 0.5 * (M(2, 1) - M(1, 2)), 0.5 * (M(0, 2) - M(2, 0)), 0.5 * (M(1, 0) - M(0, 1));
    return v;
  }

  Elem exp(const Eigen::VectorXd& X) const override {
    double theta = X.norm();
    Eigen::Matrix3d A = hat(X);
    double c1, c2;
    if (theta < 1e-4) {
      c1 = 1.0 - theta * theta / 6.0 + std::pow(theta, 4) / 120.0;
      c2 = 0.5 - theta * theta / 24.0 + std::pow(theta, 4) / 720.0;
    } else {
      c1 = std::sin(theta) / theta;
      c2 = (1.0 - std::cos(theta)) / (theta * theta);
    }
    return Eigen::Matrix3d::Identity() + c1 * A + c2 * A * A;
  }

  Eigen::VectorXd log(const Elem& g) const override {
    double c = std::clamp((g.trace() - 1.0) / 2.0, -1.0, 1.0);
    Eigen::VectorXd v = mat_to_alg(g);  // sin(theta) * axis
    double s = v.norm();
    double theta = std::atan2(s, c);  // conditioned uniformly on (0, pi)
    if (s < 1e-12) {
      if (c < 0) throw OutOfChartError("so3: rotation angle too close to pi");
      return v;
    }
    if (M_PI - theta < 1e-6)
      throw OutOfChartError("so3: rotation angle too close to pi");
    return (theta / s) * v;
  }

  bool in_chart(const Elem& g) const override {
    return (g.trace() - 1.0) / 2.0 > -1.0 + 1e-9;
  }
  Eigen::VectorXd chart(const Elem& g) const override {
    if (!in_chart(g)) throw OutOfChartError("so3: rotation angle too close to pi");
    return log(g);
  }
  double chart_radius() const override { return 3.0; }

  Elem inv(const Elem& g) const override { return g.transpose(); }
  Eigen::VectorXd Ad(const Elem& g, const Eigen::VectorXd& X) const override {
    return g * X;
  }
  Eigen::VectorXd bracket(const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y) const override {
    return Eigen::Vector3d(X).cross(Eigen::Vector3d(Y));
  }
};

// The Heisenberg group of unitriangular 3x3 matrices. Basis: e1 and e2 are
// the two superdiagonal slots, e3 the corner; [e1, e2] = e3.
class HeisenbergGroup final : public MatrixGroupBase {
 public:
  HeisenbergGroup()
      : MatrixGroupBase("heisenberg3",
                        VectorSpec(3, {euclid_seminorm(), sup_seminorm()},
                                   {{"sup", "euclid"}}),
                        3, false, true, "euclid", true) {}

  Eigen::MatrixXd alg_to_mat(const Eigen::VectorXd& X) const override {
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    M(0, 1) = X(0);
    M(1, 2) = X(1);
    M(0, 2) = X(2);
    return M;
  }
  Eigen::VectorXd mat_to_alg(const Eigen::MatrixXd& M) const override {
    return Eigen::Vector3d(M(0, 1), M(1, 2), M(0, 2));
  }

  Elem exp(const Eigen::VectorXd& X) const override {
    Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
    g(0, 1) = X(0);
    g(1, 2) = X(1);
    g(0, 2) = X(2) + 0.5 * X(0) * X(1);
    return g;
  }
  Eigen::VectorXd log(const Elem& g) const override {
    return Eigen::Vector3d(g(0, 1), g(1, 2), g(0, 2) - 0.5 * g(0, 1) * g(1, 2));
  }
  bool in_chart(const Elem&) const override { return true; }
  Eigen::VectorXd chart(const Elem& g) const override { return log(g); }
  double chart_radius() const override { return 1e6; }

  Elem inv(const Elem& g) const override {
    Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
    h(0, 1) = -g(0, 1);
    h(1, 2) = -g(1, 2);
    h(0, 2) = g(0, 1) * g(1, 2) - g(0, 2);
    return h;
  }
  Eigen::VectorXd bracket(const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y) const override {
    return Eigen::Vector3d(0.0, 0.0, X(0) * Y(1) - X(1) * Y(0));
  }
};

// gl(n) with the principal-log chart, and the unit-group variant with the
// affine chart a -> a - 1 realizing the submultiplicative product condition.
// Algebra coordinates are the column-major matrix entries.
class GlGroup : public MatrixGroupBase {
 public:
  GlGroup(std::string name, int n, bool chart_is_exp)
      : MatrixGroupBase(std::move(name), VectorSpec(n * n, {euclid_seminorm()}), n,
                        n == 1, false, "w", chart_is_exp) {
    replace_algebra(VectorSpec(n * n,
                               {euclid_seminorm(), sup_seminorm(),
                                matrix_op_seminorm(this, "op", 1.0),
                                matrix_op_seminorm(this, "w", 2.0)},
                               {{"sup", "euclid"}, {"op", "euclid"}, {"op", "w"}}));
  }

  Eigen::MatrixXd alg_to_mat(const Eigen::VectorXd& X) const override {
    return Eigen::Map<const Eigen::MatrixXd>(X.data(), n_, n_);
  }
  Eigen::VectorXd mat_to_alg(const Eigen::MatrixXd& M) const override {
    return Eigen::Map<const Eigen::VectorXd>(M.data(), n_ * n_);
  }
};

class UnitGroup final : public GlGroup {
 public:
  explicit UnitGroup(int n)
      : GlGroup("unit_group(" + std::to_string(n) + ")", n, /*chart_is_exp=*/false) {}

  bool in_chart(const Elem& g) const override {
    return std::abs(g.determinant()) > kDetFloor;
  }
  Eigen::VectorXd chart(const Elem& g) const override {
    if (!in_chart(g))
      throw OutOfChartError(name() + ": element is numerically singular");
    return mat_to_alg(g - identity());
  }
  Elem unchart(const Eigen::VectorXd& x) const override {
    Elem g = identity() + alg_to_mat(x);
    if (std::abs(g.determinant()) <= kDetFloor)
      throw OutOfChartError(name() + ": 1 + x is numerically singular");
    return g;
  }
};

// su2 as unit quaternions (w, x, y, z); the double cover of so3 with the same
// cross-product bracket, so the covering homomorphism has identity tangent map.
class Su2Group final : public Group {
 public:
  Su2Group()
      : Group("su2",
              VectorSpec(3,
                         {euclid_seminorm(), sup_seminorm(),
                          Seminorm{"op", [](const Eigen::VectorXd& x) { return x.norm(); }}},
                         {{"sup", "euclid"}, {"op", "euclid"}}),
              false, false, "euclid", true) {}

  static Eigen::Vector4d hamilton(const Eigen::Vector4d& a, const Eigen::Vector4d& b) {
    Eigen::Vector4d q;
    q(0) = a(0) * b(0) - a(1) * b(1) - a(2) * b(2) - a(3) * b(3);
    q(1) = a(0) * b(1) + a(1) * b(0) + a(2) * b(3) - a(3) * b(2);
    q(2) = a(0) * b(2) - a(1) * b(3) + a(2) * b(0) + a(3) * b(1);
    q(3) = a(0) * b(3) + a(1) * b(2) - a(2) * b(1) + a(3) * b(0);
    return q;
  }
  static Eigen::Vector4d conjugate(const Eigen::Vector4d& q) {
    return Eigen::Vector4d(q(0), -q(1), -q(2), -q(3));
  }

  Elem identity() const override { return Eigen::Vector4d(1, 0, 0, 0); }
  Elem mult(const Elem& a, const Elem& b) const override {
    Eigen::Vector4d q = hamilton(a, b);
    return q / q.norm();  // hold the unit-norm constraint against drift
  }
  Elem inv(const Elem& g) const override {
    Eigen::Vector4d q = g;
    return conjugate(q) / q.squaredNorm();
  }

  bool in_chart(const Elem& g) const override { return g(0, 0) > 1e-9; }
  Eigen::VectorXd chart(const Elem& g) const override {
    if (!in_chart(g)) throw OutOfChartError("su2: rotation angle too close to pi");
    return log(g);
  }
  Elem unchart(const Eigen::VectorXd& x) const override { return exp(x); }
  double chart_radius() const override { return 3.0; }

  Elem exp(const Eigen::VectorXd& X) const override {
    double theta = X.norm();
    double half = 0.5 * theta;
    double c = std::cos(half);
    double s = theta < 1e-8 ? 0.5 - theta * theta / 48.0 : std::sin(half) / theta;
    Eigen::Vector4d q;
    q << c, s * X(0), s * X(1), s * X(2);
    return q;
  }
  Eigen::VectorXd log(const Elem& g) const override {
    Eigen::Vector4d q = g;
    double s = q.tail<3>().norm();
    double w = q(0);
    if (s < 1e-12) {
      if (w < 0) throw OutOfChartError("su2: log undefined at the antipode");
      return 2.0 / w * q.tail<3>();
    }
    double theta = 2.0 * std::atan2(s, w);
    return (theta / s) * q.tail<3>();
  }

  Eigen::VectorXd Ad(const Elem& g, const Eigen::VectorXd& X) const override {
    Eigen::Vector4d px;
    px << 0.0, 0.5 * X(0), 0.5 * X(1), 0.5 * X(2);
    Eigen::Vector4d q = g;
    Eigen::Vector4d res = hamilton(hamilton(q, px), conjugate(q) / q.squaredNorm());
    return 2.0 * res.tail<3>();
  }
  Eigen::VectorXd bracket(const Eigen::VectorXd& X,
                          const Eigen::VectorXd& Y) const override {
    return Eigen::Vector3d(X).cross(Eigen::Vector3d(Y));
  }

  Elem product_derivative(const Elem& a, const Elem& da, const Elem& b,
                          const Elem& db) const override {
    return hamilton(da, b) + hamilton(a, db);
  }
  Elem inverse_derivative(const Elem& g, const Elem& dg) const override {
    Eigen::Vector4d gi = inv(g);
    return -hamilton(hamilton(gi, dg), gi);
  }
  Elem one_param_derivative(const Eigen::VectorXd& X, double f, double fdot) const override {
    Eigen::Vector4d px;
    px << 0.0, 0.5 * X(0), 0.5 * X(1), 0.5 * X(2);
    return fdot * hamilton(px, exp((f * X).eval()));
  }
  Eigen::VectorXd der_from_ambient(const Elem& mu, const Elem& mudot) const override {
    Eigen::Vector4d v = hamilton(mudot, inv(mu));
    return 2.0 * v.tail<3>();
  }

  // The covering map onto so3.
  static Eigen::Matrix3d rotation_of(const Eigen::Vector4d& q) {
    double w = q(0), x = q(1), y = q(2), z = q(3);
    Eigen::Matrix3d R;
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R;
  }
};

}  // namespace

Eigen::Matrix3d su2_to_so3(const Elem& q) {
  return Su2Group::rotation_of(Eigen::Vector4d(q));
}

GroupPtr make_group(const std::string& name, int n) {
  if (name == "so3") return std::make_shared<So3Group>();
  if (name == "su2") return std::make_shared<Su2Group>();
  if (name == "heisenberg3") return std::make_shared<HeisenbergGroup>();
  if (name == "abelian") {
    if (n < 1) throw std::invalid_argument("abelian(d): need d >= 1");
    return std::make_shared<AbelianGroup>(n);
  }
  if (name == "torus") {
    if (n < 1) throw std::invalid_argument("torus(d): need d >= 1");
    return std::make_shared<TorusGroup>(n);
  }
  if (name == "gl") {
    if (n < 1) throw std::invalid_argument("gl(n): need n >= 1");
    return std::make_shared<GlGroup>("gl(" + std::to_string(n) + ")", n, true);
  }
  if (name == "unit_group") {
    if (n < 1) throw std::invalid_argument("unit_group(n): need n >= 1");
    return std::make_shared<UnitGroup>(n);
  }
  throw std::invalid_argument("make_group: unknown group '" + name + "'");
}

GroupPtr parse_group(const std::string& text) {
  auto open = text.find('(');
  if (open == std::string::npos) return make_group(text);
  auto close = text.find(')', open);
  if (close == std::string::npos)
    throw std::invalid_argument("parse_group: malformed '" + text + "'");
  int n = std::stoi(text.substr(open + 1, close - open - 1));
  return make_group(text.substr(0, open), n);
}

}  // namespace prodint
