#pragma once

#include <Eigen/Core>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace prodint {

struct Seminorm {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> eval;

  double operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

inline Seminorm euclid_seminorm() {
  return {"euclid", [](const Eigen::VectorXd& x) { return x.norm(); }};
}
inline Seminorm sup_seminorm() {
  return {"sup", [](const Eigen::VectorXd& x) {
            return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
          }};
}
inline Seminorm scaled_seminorm(const Seminorm& s, double c, std::string name) {
  auto base = s.eval;
  return {std::move(name),
          [base, c](const Eigen::VectorXd& x) { return c * base(x); }};
}

// A finite-dimensional coefficient space together with a finite family of
// named seminorms and declared dominations p <= q.
class VectorSpec {
 public:
  VectorSpec() = default;
  VectorSpec(int dim, std::vector<Seminorm> seminorms,
             std::vector<std::pair<std::string, std::string>> dominations = {})
      : dim_(dim),
        seminorms_(std::move(seminorms)),
        dominations_(std::move(dominations)) {
    if (dim_ <= 0) throw std::invalid_argument("VectorSpec: dimension must be positive");
    if (seminorms_.empty())
      throw std::invalid_argument("VectorSpec: need at least one seminorm");
  }

  int dim() const { return dim_; }
  const std::vector<Seminorm>& seminorms() const { return seminorms_; }
  const std::vector<std::pair<std::string, std::string>>& dominations() const {
    return dominations_;
  }

  const Seminorm& find(const std::string& name) const {
    for (const auto& s : seminorms_)
      if (s.name == name) return s;
    throw std::invalid_argument("VectorSpec: unknown seminorm '" + name + "'");
  }
  bool has(const std::string& name) const {
    for (const auto& s : seminorms_)
      if (s.name == name) return true;
    return false;
  }

  // Pointwise maximum over the declared family.
  double max_seminorm(const Eigen::VectorXd& x) const {
    double m = 0.0;
    for (const auto& s : seminorms_) m = std::max(m, s(x));
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<Seminorm> seminorms_;
  std::vector<std::pair<std::string, std::string>> dominations_;
};

}  // namespace prodint
