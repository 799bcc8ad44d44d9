#pragma once

#include <Eigen/Core>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include "prodint/seminorm.hpp"

namespace prodint {

// Group elements in their ambient representation: n x n matrices for matrix
// groups, 4 x 1 quaternions for su2, d x 1 coordinate vectors for the abelian
// and torus instances. Ambient linear combinations are entrywise.
using Elem = Eigen::MatrixXd;

class OutOfChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SingularElementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A concrete Lie group: identity, multiplication, inversion, a chart at the
// identity, Ad, bracket, exp. Immutable after construction.
class Group {
 public:
  virtual ~Group() = default;

  const std::string& name() const { return name_; }
  int dim() const { return algebra_.dim(); }
  const VectorSpec& algebra() const { return algebra_; }
  bool abelian() const { return abelian_; }
  bool nilpotent() const { return nilpotent_; }
  // Name of a seminorm w with w([X,Y]) <= w(X) w(Y), empty if none declared.
  const std::string& submultiplicative_seminorm() const { return submult_; }
  // True when the chart is the inverse of exp near the identity.
  bool chart_is_exp() const { return chart_is_exp_; }

  virtual Elem identity() const = 0;
  virtual Elem mult(const Elem& a, const Elem& b) const = 0;
  virtual Elem inv(const Elem& g) const = 0;

  virtual bool in_chart(const Elem& g) const = 0;
  virtual Eigen::VectorXd chart(const Elem& g) const = 0;
  virtual Elem unchart(const Eigen::VectorXd& x) const = 0;
  // exp(X) is safely inside the chart for euclid norms below this radius.
  virtual double chart_radius() const = 0;

  virtual Elem exp(const Eigen::VectorXd& X) const = 0;
  virtual Eigen::VectorXd log(const Elem& g) const = 0;  // inverse of exp near e

  virtual Eigen::VectorXd Ad(const Elem& g, const Eigen::VectorXd& X) const = 0;
  virtual Eigen::VectorXd bracket(const Eigen::VectorXd& X,
                                  const Eigen::VectorXd& Y) const = 0;

  // Ambient-representation calculus for curves of group elements.
  virtual Elem product_derivative(const Elem& a, const Elem& da, const Elem& b,
                                  const Elem& db) const = 0;
  virtual Elem inverse_derivative(const Elem& g, const Elem& dg) const = 0;
  // Derivative of t -> exp(f(t) X) given f(t) and f'(t).
  virtual Elem one_param_derivative(const Eigen::VectorXd& X, double f,
                                    double fdot) const = 0;
  // dR_{mu^-1}(mudot) in algebra coordinates.
  virtual Eigen::VectorXd der_from_ambient(const Elem& mu, const Elem& mudot) const = 0;

  virtual bool element_ok(const Elem& g) const;

  Eigen::MatrixXd Ad_matrix(const Elem& g) const;
  Eigen::MatrixXd ad_matrix(const Eigen::VectorXd& X) const;

  Eigen::VectorXd random_algebra(std::mt19937_64& gen, double radius) const;
  Elem random_near_identity(std::mt19937_64& gen, double radius) const;

 protected:
  Group(std::string name, VectorSpec algebra, bool abelian, bool nilpotent,
        std::string submult, bool chart_is_exp)
      : name_(std::move(name)),
        algebra_(std::move(algebra)),
        abelian_(abelian),
        nilpotent_(nilpotent),
        submult_(std::move(submult)),
        chart_is_exp_(chart_is_exp) {}

  // Instances whose seminorms close over the constructed object install the
  // final family here at the end of their constructor.
  void replace_algebra(VectorSpec spec) { algebra_ = std::move(spec); }

 private:
  std::string name_;
  VectorSpec algebra_;
  bool abelian_ = false;
  bool nilpotent_ = false;
  std::string submult_;
  bool chart_is_exp_ = true;
};

// The matrix of Y -> bracket(X, Y).
Eigen::MatrixXd ad_operator(const Group& G, const Eigen::VectorXd& X);

// Distance between two group elements measured in the chart at g:
// seminorm of chart(g^-1 h). Falls back to the raw ambient distance with
// in_chart == false when g^-1 h leaves the chart.
struct ChartDistance {
  double value = 0.0;
  bool in_chart = true;
};
ChartDistance chart_distance(const Group& G, const Elem& g, const Elem& h);
ChartDistance chart_distance(const Group& G, const Elem& g, const Elem& h,
                             const Seminorm& p);

// name in {gl(n), so3, su2, heisenberg3, abelian(d), torus(d), unit_group(n)},
// where the parametric families take their parameter via n.
GroupPtr make_group(const std::string& name, int n = 0);
// Accepts the parenthesized spelling, e.g. "abelian(3)".
GroupPtr parse_group(const std::string& text);

// Covering map of the double cover onto the rotation group; its tangent map
// at the identity is the identity in the conventions used here.
Eigen::Matrix3d su2_to_so3(const Elem& q);

// Matrix helpers shared by the concrete instances and by tests.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A);
// Principal logarithm by inverse scaling and squaring: square roots until
// the argument is within operator-norm distance 1/2 of the identity, then a
// log series. Throws OutOfChartError off the principal branch.
Eigen::MatrixXd matrix_log(const Eigen::MatrixXd& A);
double operator_norm(const Eigen::MatrixXd& A);

}  // namespace prodint
