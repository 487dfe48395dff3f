#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

namespace mobo {

/// Kernel hyperparameters, one lengthscale per input dimension. Optimised in
/// log-space to keep them positive.
struct Hyperparams {
  double signal_std = 1.0;
  Eigen::VectorXd lengthscales;
  double noise_std = 0.0;

  void validate() const;  // throws std::invalid_argument
};

struct Prediction {
  double mean = 0.0;
  double std = 0.0;
};

/// ARD squared-exponential kernel
///   sigma_f^2 exp(-1/2 sum_j (x_j - x'_j)^2 / l_j^2) + sigma_n^2 [same_point]
double se_ard_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                     const Hyperparams& hp, bool same_point);

/// Log marginal likelihood of the targets under a zero-mean GP prior,
///   -1/2 f^T K^-1 f - 1/2 log|K| - N/2 log 2pi,
/// with K factorised through the jitter ladder. Throws if K stays non
/// positive definite at the maximal jitter.
double log_marginal_likelihood(const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, const Hyperparams& hp);

struct GpFitOptions {
  int restarts = 10;
  std::uint64_t seed = 0;
  std::optional<double> fixed_noise;  // when set, sigma_n is not optimised
  int max_iter = 30;                  // BFGS iterations per restart
};

/// Trained model. Targets are standardised internally and predictions are
/// mapped back, so callers always see the original target scale. Immutable
/// after construction and safe to share across threads.
class GpModel {
 public:
  GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, Hyperparams hp);

  Prediction predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  const Hyperparams& hyperparams() const { return hp_; }
  const Eigen::MatrixXd& train_inputs() const { return inputs_; }
  const Eigen::VectorXd& train_targets() const { return targets_raw_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }
  const Eigen::VectorXd& weight_vector() const { return weights_; }
  double jitter() const { return jitter_; }
  double target_mean() const { return target_mean_; }
  double target_scale() const { return target_scale_; }
  /// Log marginal likelihood of the standardised training targets.
  double log_likelihood() const { return lml_; }

 private:
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd targets_raw_;
  Eigen::VectorXd targets_std_;
  double target_mean_ = 0.0;
  double target_scale_ = 1.0;
  Hyperparams hp_;
  Eigen::MatrixXd chol_;      // lower factor of K + jitter I
  Eigen::VectorXd weights_;   // (K + jitter I)^-1 f, standardised targets
  double jitter_ = 0.0;
  double lml_ = 0.0;
};

/// Maximum-likelihood fit: `restarts` BFGS runs in log-hyperparameter space,
/// the first from a fixed heuristic point and the rest from seeded log-uniform
/// draws within the bounds. Returns the model with the best likelihood.
GpModel fit_gp(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
               const GpFitOptions& options = {});

}  // namespace mobo
