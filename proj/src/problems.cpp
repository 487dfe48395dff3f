#include "mobo/problems.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mobo/math.hpp"

namespace mobo {

std::string to_string(ProblemName name) {
  switch (name) {
    case ProblemName::Dtlz2: return "DTLZ2";
    case ProblemName::Dtlz5: return "DTLZ5";
    case ProblemName::Dtlz7: return "DTLZ7";
  }
  throw std::logic_error("unknown ProblemName");
}

ProblemName problem_from_string(const std::string& name) {
  if (name == "DTLZ2") return ProblemName::Dtlz2;
  if (name == "DTLZ5") return ProblemName::Dtlz5;
  if (name == "DTLZ7") return ProblemName::Dtlz7;
  throw std::invalid_argument("unknown problem name: " + name);
}

void ProblemSpec::validate() const {
  if (num_objectives < 2) throw std::invalid_argument("ProblemSpec: num_objectives must be >= 2");
  if (num_variables < num_objectives)
    throw std::invalid_argument("ProblemSpec: num_variables must be >= num_objectives");
}

namespace {

// f_i = (1+g) prod_{j<m-1-i} cos(theta_j pi/2) * (i>0 ? sin(theta_{m-1-i} pi/2) : 1)
Eigen::VectorXd spherical_objectives(const Eigen::VectorXd& theta, double g, int m) {
  Eigen::VectorXd f(m);
  for (int i = 0; i < m; ++i) {
    double v = 1.0 + g;
    for (int j = 0; j < m - 1 - i; ++j) v *= std::cos(theta[j] * kPi / 2.0);
    if (i > 0) v *= std::sin(theta[m - 1 - i] * kPi / 2.0);
    f[i] = v;
  }
  return f;
}

}  // namespace

Eigen::VectorXd ProblemSpec::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  validate();
  if (x.size() != num_variables) throw std::invalid_argument("evaluate: dimension mismatch");
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any())
    throw std::invalid_argument("evaluate: point outside [0,1]^n");

  const int m = num_objectives;
  const int n = num_variables;
  const int k = n - m + 1;  // distance variables
  const auto xm = x.tail(k);

  switch (name) {
    case ProblemName::Dtlz2: {
      const double g = (xm.array() - 0.5).square().sum();
      return spherical_objectives(x.head(m - 1), g, m);
    }
    case ProblemName::Dtlz5: {
      const double g = (xm.array() - 0.5).square().sum();
      Eigen::VectorXd theta(m - 1);
      theta[0] = x[0];
      for (int j = 1; j < m - 1; ++j)
        theta[j] = (1.0 + 2.0 * g * x[j]) / (2.0 * (1.0 + g));
      return spherical_objectives(theta, g, m);
    }
    case ProblemName::Dtlz7: {
      const double g = 1.0 + 9.0 * xm.mean();
      Eigen::VectorXd f(m);
      f.head(m - 1) = x.head(m - 1);
      double h = static_cast<double>(m);
      for (int i = 0; i < m - 1; ++i)
        h -= f[i] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * f[i]));
      f[m - 1] = (1.0 + g) * h;
      return f;
    }
  }
  throw std::logic_error("unknown ProblemName");
}

Eigen::VectorXd ProblemSpec::reference_point() const {
  validate();
  if (name == ProblemName::Dtlz7) {
    Eigen::VectorXd ref = Eigen::VectorXd::Ones(num_objectives);
    ref[num_objectives - 1] = 2.2 * num_objectives;
    return ref;
  }
  return Eigen::VectorXd::Constant(num_objectives, 1.1);
}

std::string ProblemSpec::id() const {
  return to_string(name) + "_m" + std::to_string(num_objectives) + "_n" +
         std::to_string(num_variables);
}

void Dataset::append(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& f) {
  if (inputs.rows() == 0) {
    inputs.resize(1, x.size());
    objectives.resize(1, f.size());
    inputs.row(0) = x;
    objectives.row(0) = f;
    return;
  }
  if (x.size() != inputs.cols() || f.size() != objectives.cols())
    throw std::invalid_argument("Dataset::append: dimension mismatch");
  inputs.conservativeResize(inputs.rows() + 1, Eigen::NoChange);
  objectives.conservativeResize(objectives.rows() + 1, Eigen::NoChange);
  inputs.row(inputs.rows() - 1) = x;
  objectives.row(objectives.rows() - 1) = f;
}

Eigen::MatrixXd lhs_sample(int num_variables, int count, Rng& rng) {
  if (num_variables < 1) throw std::invalid_argument("lhs_sample: need at least one variable");
  if (count < 1) throw std::invalid_argument("lhs_sample: count must be >= 1");
  Eigen::MatrixXd design(count, num_variables);
  std::vector<int> perm(static_cast<size_t>(count));
  for (int j = 0; j < num_variables; ++j) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = count - 1; k > 0; --k) std::swap(perm[k], perm[rng.uniform_int(k + 1)]);
    for (int k = 0; k < count; ++k)
      design(k, j) = (static_cast<double>(perm[static_cast<size_t>(k)]) + rng.uniform()) /
                     static_cast<double>(count);
  }
  return design;
}

}  // namespace mobo
