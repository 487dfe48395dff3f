#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "mobo/rng.hpp"

namespace mobo {

/// The scalarised value g = max_i w_i (f_i - z_i) of independent Gaussian
/// objectives is the max of independent Gaussians with shifted means
/// m_i = w_i (mu_i - z_i) and scaled deviations s_i = w_i sigma_i.
struct ScalarisedPosterior {
  Eigen::VectorXd shifted_means;  // m_i
  Eigen::VectorXd scaled_stds;    // s_i, floored away from zero

  static ScalarisedPosterior from_predictions(const Eigen::VectorXd& means,
                                              const Eigen::VectorXd& stds,
                                              const Eigen::VectorXd& weights,
                                              const Eigen::VectorXd& ideal);

  void validate() const;  // throws std::invalid_argument
};

/// Density of the max: sum_i phi_i/s_i * prod_{j != i} Phi_j, evaluated in
/// log space. Returns 0 in extreme tails.
double exact_pdf(const ScalarisedPosterior& sp, double g);
double exact_log_pdf(const ScalarisedPosterior& sp, double g);

/// CDF of the max: prod_i Phi((g - m_i)/s_i).
double exact_cdf(const ScalarisedPosterior& sp, double g);

/// Draws of max_i N(m_i, s_i^2); one normal variate per component per draw.
Eigen::ArrayXd sample(const ScalarisedPosterior& sp, int count, Rng& rng);

/// Same draw given a prepared (count x m) matrix of standard normals; used to
/// share common random numbers across many query points.
void sample_with_normals(const ScalarisedPosterior& sp, const Eigen::MatrixXd& normals,
                         Eigen::ArrayXd& out);

struct GumbelParams {
  double location = 0.0;  // alpha
  double scale = 1.0;     // beta > 0
};

/// Maximum-likelihood Gumbel fit by the damped fixed-point iteration
///   beta <- mean(g) - sum g_i e^{-g_i/beta} / sum e^{-g_i/beta}
/// started from the method-of-moments value, then
///   alpha = -beta log(mean e^{-g_i/beta}).
/// Throws on constant samples or if 200 iterations do not converge.
GumbelParams fit_gumbel(const Eigen::Ref<const Eigen::ArrayXd>& samples);

double gumbel_pdf(const GumbelParams& p, double g);
double gumbel_cdf(const GumbelParams& p, double g);

/// Gumbel log-likelihood N log(1/beta) - sum t_i - sum e^{-t_i}.
double gumbel_log_likelihood(const GumbelParams& p,
                             const Eigen::Ref<const Eigen::ArrayXd>& samples);

struct LaplaceParams {
  double mode = 0.0;       // g0
  double precision = 0.0;  // A > 0; the approximation is N(g0, 1/A)
};

/// Gaussian approximation at the mode of the exact density. The mode comes
/// from a safeguarded Newton solve of d log p / dg = 0 (central differences,
/// h = 1e-5 max s) and A = -d^2 log p / dg^2 at the mode.
LaplaceParams laplace_fit(const ScalarisedPosterior& sp);

double laplace_pdf(const LaplaceParams& p, double g);

struct GaussianityReport {
  int sample_count = 0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  double skewness = 0.0;
  double ks_gaussian = 0.0;  // empirical CDF vs moment-matched Gaussian
  double ks_gumbel = 0.0;    // empirical CDF vs MLE-fitted Gumbel
  GumbelParams gumbel;

  std::vector<std::pair<std::string, double>> to_flat_kv() const;
};

/// Sampling diagnostic of how non-Gaussian the scalarised distribution is.
GaussianityReport gaussianity_report(const ScalarisedPosterior& sp, int sample_count,
                                     Rng& rng);

}  // namespace mobo
