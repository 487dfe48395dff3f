#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "mobo/rng.hpp"

namespace mobo {

/// Real-coded GA settings: tournament selection of size 2, simulated binary
/// crossover, polynomial mutation, elitism of one.
struct GaConfig {
  int population = 100;  // even, >= 4
  int generations = 100;
  double crossover_prob = 0.9;
  double mutation_prob = -1.0;  // < 0 selects the 1/n default
  double sbx_eta = 15.0;
  double pm_eta = 20.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct GaResult {
  Eigen::VectorXd best_x;
  double best_value = 0.0;
};

/// Maximises `objective` over the box [lower, upper]. Returns the best
/// individual ever evaluated; deterministic under cfg.seed.
GaResult ga_maximise(const std::function<double(const Eigen::VectorXd&)>& objective,
                     const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const GaConfig& cfg);

struct QnResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool converged = false;
};

/// Bounded BFGS ascent with a projected backtracking line search. `gradient`
/// may be empty, in which case central differences (h = 1e-6) are used.
/// Never returns a point with a lower objective than x0 or outside the box.
QnResult quasi_newton_maximise(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    const Eigen::VectorXd& x0, const Eigen::VectorXd& lower,
    const Eigen::VectorXd& upper, int max_iter = 200);

/// Finds a root of `derivative` inside [a, b], which must bracket a sign
/// change. Secant-slope Newton steps with bisection whenever a step would
/// leave the bracket. Stops when |derivative(x)| < tol.
double safeguarded_newton_1d(const std::function<double(double)>& derivative,
                             double a, double b, double tol);

}  // namespace mobo
