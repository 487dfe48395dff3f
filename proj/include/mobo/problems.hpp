#pragma once

#include <Eigen/Core>
#include <string>

#include "mobo/rng.hpp"

namespace mobo {

enum class ProblemName { Dtlz2, Dtlz5, Dtlz7 };

std::string to_string(ProblemName name);
ProblemName problem_from_string(const std::string& name);  // throws on unknown names

/// A benchmark instance over the unit box [0,1]^n, minimising m objectives.
struct ProblemSpec {
  ProblemName name = ProblemName::Dtlz2;
  int num_objectives = 2;
  int num_variables = 5;

  void validate() const;  // n >= m >= 2

  Eigen::VectorXd lower_bounds() const { return Eigen::VectorXd::Zero(num_variables); }
  Eigen::VectorXd upper_bounds() const { return Eigen::VectorXd::Ones(num_variables); }

  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Fixed reference vector shared by all algorithms for hypervolume
  /// reporting: 1.1 per objective for the unit-sphere fronts, and for the
  /// disconnected-front problem (1,...,1, 2.2 m) reflecting its front ranges.
  Eigen::VectorXd reference_point() const;

  std::string id() const;  // e.g. "DTLZ2_m2_n5"
};

/// Evaluated archive: one row per expensive evaluation.
struct Dataset {
  Eigen::MatrixXd inputs;      // N x n
  Eigen::MatrixXd objectives;  // N x m

  int eval_count() const { return static_cast<int>(inputs.rows()); }
  void append(const Eigen::Ref<const Eigen::VectorXd>& x,
              const Eigen::Ref<const Eigen::VectorXd>& f);
};

/// Latin hypercube design on [0,1)^n: each 1-D projection has exactly one
/// point per stratum [k/count, (k+1)/count).
Eigen::MatrixXd lhs_sample(int num_variables, int count, Rng& rng);

}  // namespace mobo
