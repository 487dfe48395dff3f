#pragma once

#include <Eigen/Core>
#include <vector>

#include "mobo/gp.hpp"
#include "mobo/rng.hpp"
#include "mobo/scalar_dist.hpp"
#include "mobo/scalarise.hpp"

namespace mobo {

/// Improvement threshold state for one iteration: the best scalarised value
/// over evaluated points and the nondominated observed front.
struct Incumbent {
  double best_scalarised = 0.0;
  Eigen::MatrixXd front;  // rows are mutually nondominated objective vectors

  static Incumbent from_observations(const Eigen::MatrixXd& objectives,
                                     const WeightVector& w, const NormalisationState& norm);
};

/// Closed-form expected improvement of a Gaussian posterior below the
/// incumbent: (g'-mu) Phi(u) + sigma phi(u), u = (g'-mu)/sigma. Collapses to
/// max(0, g'-mu) as sigma -> 0.
double ei_closed_form(double mean, double std, double incumbent);

/// Monte Carlo EI over a fitted Gumbel: mean of max(0, g' - g_k) with g_k
/// drawn from the Gumbel.
double ei_monte_carlo(const GumbelParams& dist, double incumbent, int count, Rng& rng);

/// Same estimate reusing prepared uniform draws (common random numbers).
double ei_monte_carlo(const GumbelParams& dist, double incumbent,
                      const Eigen::Ref<const Eigen::ArrayXd>& uniforms);

/// EI averaged directly over raw scalarised samples.
double ei_from_samples(const Eigen::Ref<const Eigen::ArrayXd>& g_samples, double incumbent);

/// Monte Carlo expected hypervolume improvement of an independent Gaussian
/// objective vector against a nondominated front. Exact when every predictive
/// deviation is zero. Every front member must strictly dominate ref_point.
double ehvi(const std::vector<Prediction>& predictions, const Eigen::MatrixXd& front,
            const Eigen::VectorXd& ref_point, int count, Rng& rng);

/// Common-random-numbers variant; `normals` is (count x m).
double ehvi_with_normals(const std::vector<Prediction>& predictions,
                         const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point,
                         const Eigen::MatrixXd& normals);

}  // namespace mobo
