// Independent reference computations for the test suites. Everything here is
// deliberately brute force or generic (quadrature, enumeration, sampling) and
// shares no code path with the library implementations it checks.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "mobo/rng.hpp"

namespace oracles {

inline double simpson_rule(const std::function<double(double)>& f, double a, double m,
                           double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb, double whole,
                                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(f, a, lm, m, fa, flm, fm);
  const double right = simpson_rule(f, m, rm, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 30) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, simpson_rule(f, a, m, b, fa, fm, fb),
                               tol, depth);
}

/// Central difference derivative.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// O(N^2 m) pairwise nondominated filter with the first-duplicate-wins rule.
inline std::vector<Eigen::Index> brute_force_nondominated(const Eigen::MatrixXd& pts) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    bool removed = false;
    for (Eigen::Index j = 0; j < pts.rows() && !removed; ++j) {
      if (j == i) continue;
      const bool weakly = (pts.row(j).array() <= pts.row(i).array()).all();
      if (!weakly) continue;
      const bool equal = pts.row(j) == pts.row(i);
      if (!equal || j < i) removed = true;
    }
    if (!removed) keep.push_back(i);
  }
  return keep;
}

/// Monte Carlo box-counting hypervolume; writes the standard error if asked.
inline double mc_hypervolume(const Eigen::MatrixXd& front, const Eigen::VectorXd& ref,
                             int count, mobo::Rng& rng, double* std_error = nullptr) {
  const auto m = ref.size();
  Eigen::VectorXd lo = front.colwise().minCoeff();
  double volume = 1.0;
  for (Eigen::Index j = 0; j < m; ++j) volume *= ref[j] - lo[j];
  Eigen::VectorXd y(m);
  long hits = 0;
  for (int k = 0; k < count; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) y[j] = lo[j] + (ref[j] - lo[j]) * rng.uniform();
    for (Eigen::Index i = 0; i < front.rows(); ++i) {
      if ((front.row(i).transpose().array() <= y.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double p = static_cast<double>(hits) / static_cast<double>(count);
  if (std_error) *std_error = volume * std::sqrt(p * (1.0 - p) / static_cast<double>(count));
  return volume * p;
}

/// The closed-form derivative of the log density of max(N(m1,s1^2), N(m2,s2^2))
/// written with Erfc terms, as used to cross-check the numerical mode search.
inline double analytic_dlogp_m2(double g, double m1, double m2, double s1, double s2) {
  const double sqrt2 = std::sqrt(2.0);
  const double sqrt2pi = std::sqrt(2.0 * M_PI);
  const double E1 = std::erfc((m1 - g) / (sqrt2 * s1));
  const double E2 = std::erfc((m2 - g) / (sqrt2 * s2));
  const double G1 = std::exp((g - m1) * (g - m1) / (2.0 * s1 * s1));
  const double G2 = std::exp((g - m2) * (g - m2) / (2.0 * s2 * s2));
  const double num = 4.0 * s1 * s1 * s2 * s2 +
                     sqrt2pi * (-G1 * (g - m2) * s1 * s1 * s1 * E1 -
                                G2 * (g - m1) * s2 * s2 * s2 * E2);
  const double den = sqrt2pi * s1 * s1 * s2 * s2 * (G1 * s1 * E1 + G2 * s2 * E2);
  return num / den;
}

}  // namespace oracles
