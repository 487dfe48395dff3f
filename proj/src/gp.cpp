#include "mobo/gp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "mobo/math.hpp"
#include "mobo/optimizers.hpp"
#include "mobo/rng.hpp"

namespace mobo {

void Hyperparams::validate() const {
  if (!(signal_std > 0.0)) throw std::invalid_argument("Hyperparams.signal_std must be > 0");
  if (lengthscales.size() == 0 || !(lengthscales.array() > 0.0).all())
    throw std::invalid_argument("Hyperparams.lengthscales must all be > 0");
  if (noise_std < 0.0) throw std::invalid_argument("Hyperparams.noise_std must be >= 0");
}

double se_ard_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                     const Hyperparams& hp, bool same_point) {
  if (x.size() != x_prime.size() || x.size() != hp.lengthscales.size())
    throw std::invalid_argument("se_ard_kernel: dimension mismatch");
  const double q = ((x - x_prime).array() / hp.lengthscales.array()).square().sum();
  double k = hp.signal_std * hp.signal_std * std::exp(-0.5 * q);
  if (same_point) k += hp.noise_std * hp.noise_std;
  return k;
}

namespace {

// Squared coordinate differences per dimension, shared by every kernel and
// gradient evaluation on a fixed data set.
std::vector<Eigen::MatrixXd> squared_diffs(const Eigen::MatrixXd& X) {
  const auto n = X.cols();
  const auto N = X.rows();
  std::vector<Eigen::MatrixXd> d(static_cast<size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::MatrixXd diff = X.col(j).replicate(1, N) - X.col(j).transpose().replicate(N, 1);
    d[static_cast<size_t>(j)] = diff.array().square();
  }
  return d;
}

// Noise-free covariance from the precomputed squared differences.
Eigen::MatrixXd se_matrix(const std::vector<Eigen::MatrixXd>& sqdiff,
                          const Hyperparams& hp) {
  const auto N = sqdiff.front().rows();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(N, N);
  for (size_t j = 0; j < sqdiff.size(); ++j) {
    const double l2 = hp.lengthscales[static_cast<Eigen::Index>(j)] *
                      hp.lengthscales[static_cast<Eigen::Index>(j)];
    q += sqdiff[j] / l2;
  }
  return (hp.signal_std * hp.signal_std) * (-0.5 * q.array()).exp().matrix();
}

struct CholeskyResult {
  Eigen::MatrixXd L;
  double jitter = 0.0;
};

// Jitter ladder 1e-10 .. 1e-6 (factors of 10), relative to the mean diagonal.
CholeskyResult robust_cholesky(const Eigen::MatrixXd& K) {
  const double scale = K.diagonal().mean();
  for (double rel = 1e-10; rel <= 1.0000001e-6; rel *= 10.0) {
    Eigen::MatrixXd Kj = K;
    Kj.diagonal().array() += rel * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(Kj);
    if (llt.info() == Eigen::Success) return {Eigen::MatrixXd(llt.matrixL()), rel * scale};
  }
  throw std::runtime_error("non-PD kernel matrix");
}

double lml_from_factor(const Eigen::MatrixXd& L, const Eigen::VectorXd& f,
                       Eigen::VectorXd* alpha_out = nullptr) {
  const auto N = f.size();
  Eigen::VectorXd alpha = L.triangularView<Eigen::Lower>().solve(f);
  const double quad = alpha.squaredNorm();  // f^T K^-1 f
  alpha = L.transpose().triangularView<Eigen::Upper>().solve(alpha);
  if (alpha_out) *alpha_out = alpha;
  const double logdet = 2.0 * L.diagonal().array().log().sum();
  return -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(N) * kLog2Pi;
}

// Log-space parameter vector layout: [log sf, log l_1..log l_n, (log sn)].
struct ThetaLayout {
  Eigen::Index n = 0;
  bool has_noise = true;
  Eigen::Index size() const { return 1 + n + (has_noise ? 1 : 0); }
};

Hyperparams theta_to_hp(const Eigen::VectorXd& theta, const ThetaLayout& lay,
                        double fixed_noise) {
  Hyperparams hp;
  hp.signal_std = std::exp(theta[0]);
  hp.lengthscales = theta.segment(1, lay.n).array().exp();
  hp.noise_std = lay.has_noise ? std::exp(theta[1 + lay.n]) : fixed_noise;
  return hp;
}

}  // namespace

double log_marginal_likelihood(const Eigen::MatrixXd& inputs,
                               const Eigen::VectorXd& targets, const Hyperparams& hp) {
  if (inputs.rows() != targets.size())
    throw std::invalid_argument("log_marginal_likelihood: row counts disagree");
  if (inputs.cols() != hp.lengthscales.size())
    throw std::invalid_argument("log_marginal_likelihood: dimension mismatch");
  hp.validate();
  const auto sqd = squared_diffs(inputs);
  Eigen::MatrixXd K = se_matrix(sqd, hp);
  K.diagonal().array() += hp.noise_std * hp.noise_std;
  const auto chol = robust_cholesky(K);
  return lml_from_factor(chol.L, targets);
}

GpModel::GpModel(Eigen::MatrixXd inputs, Eigen::VectorXd targets, Hyperparams hp)
    : inputs_(std::move(inputs)), targets_raw_(std::move(targets)), hp_(std::move(hp)) {
  if (inputs_.rows() != targets_raw_.size())
    throw std::invalid_argument("GpModel: row counts disagree");
  if (inputs_.cols() != hp_.lengthscales.size())
    throw std::invalid_argument("GpModel: dimension mismatch");
  hp_.validate();

  target_mean_ = targets_raw_.mean();
  const double var = (targets_raw_.array() - target_mean_).square().mean();
  target_scale_ = std::sqrt(var);
  if (target_scale_ < 1e-12) target_scale_ = 1.0;
  targets_std_ = (targets_raw_.array() - target_mean_) / target_scale_;

  const auto sqd = squared_diffs(inputs_);
  Eigen::MatrixXd K = se_matrix(sqd, hp_);
  K.diagonal().array() += hp_.noise_std * hp_.noise_std;
  auto chol = robust_cholesky(K);
  chol_ = std::move(chol.L);
  jitter_ = chol.jitter;
  lml_ = lml_from_factor(chol_, targets_std_, &weights_);
}

Prediction GpModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != inputs_.cols()) throw std::invalid_argument("GpModel::predict: dimension mismatch");
  const auto N = inputs_.rows();
  Eigen::VectorXd k(N);
  const double sf2 = hp_.signal_std * hp_.signal_std;
  for (Eigen::Index i = 0; i < N; ++i) {
    const double q =
        ((inputs_.row(i).transpose() - x).array() / hp_.lengthscales.array()).square().sum();
    k[i] = sf2 * std::exp(-0.5 * q);
  }
  const double mean_s = k.dot(weights_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
  double var_s = sf2 - v.squaredNorm();
  if (var_s < 0.0) var_s = 0.0;
  return {mean_s * target_scale_ + target_mean_, std::sqrt(var_s) * target_scale_};
}

GpModel fit_gp(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets,
               const GpFitOptions& options) {
  const auto N = inputs.rows();
  const auto n = inputs.cols();
  if (N != targets.size()) throw std::invalid_argument("fit_gp: row counts disagree");
  if (N < 2) throw std::invalid_argument("fit_gp: need at least 2 points");
  if (options.restarts < 1) throw std::invalid_argument("fit_gp: restarts must be >= 1");

  // standardised targets drive the likelihood; the model rebuilds this
  // transform identically afterwards
  const double t_mean = targets.mean();
  double t_scale = std::sqrt((targets.array() - t_mean).square().mean());
  if (t_scale < 1e-12) t_scale = 1.0;
  const Eigen::VectorXd f = (targets.array() - t_mean) / t_scale;

  const auto sqd = squared_diffs(inputs);

  ThetaLayout lay{n, !options.fixed_noise.has_value()};
  const double fixed_noise = options.fixed_noise.value_or(0.0);

  // log-space bounds: lengthscales relative to the per-dimension data range
  Eigen::VectorXd range(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = inputs.col(j).maxCoeff() - inputs.col(j).minCoeff();
    range[j] = r > 1e-12 ? r : 1.0;
  }
  Eigen::VectorXd lo(lay.size()), hi(lay.size());
  lo[0] = std::log(1e-3);
  hi[0] = std::log(1e3);
  for (Eigen::Index j = 0; j < n; ++j) {
    lo[1 + j] = std::log(1e-3 * range[j]);
    hi[1 + j] = std::log(1e3 * range[j]);
  }
  if (lay.has_noise) {
    lo[1 + n] = std::log(1e-6);
    hi[1 + n] = std::log(1.0);
  }

  const double neg_inf = -std::numeric_limits<double>::infinity();

  // the line search evaluates the value at many points and the gradient only
  // at accepted ones, so the factorisation of the last evaluated point is
  // kept for reuse
  struct FactorCache {
    Eigen::VectorXd theta;
    Eigen::MatrixXd Kse;
    Eigen::MatrixXd L;
    bool valid = false;
  };
  FactorCache cache;

  auto factorise = [&](const Eigen::VectorXd& theta, const Hyperparams& hp) -> bool {
    if (cache.valid && cache.theta.size() == theta.size() && cache.theta == theta) return true;
    cache.valid = false;
    cache.Kse = se_matrix(sqd, hp);
    Eigen::MatrixXd K = cache.Kse;
    K.diagonal().array() += hp.noise_std * hp.noise_std;
    try {
      cache.L = robust_cholesky(K).L;
    } catch (const std::runtime_error&) {
      return false;
    }
    cache.theta = theta;
    cache.valid = true;
    return true;
  };

  auto objective = [&](const Eigen::VectorXd& theta) -> double {
    const Hyperparams hp = theta_to_hp(theta, lay, fixed_noise);
    if (!factorise(theta, hp)) return neg_inf;
    return lml_from_factor(cache.L, f);
  };

  // dL/dtheta = 1/2 tr((alpha alpha^T - K^-1) dK/dtheta) in log-space
  auto gradient = [&](const Eigen::VectorXd& theta) -> Eigen::VectorXd {
    const Hyperparams hp = theta_to_hp(theta, lay, fixed_noise);
    if (!factorise(theta, hp)) return Eigen::VectorXd::Zero(lay.size());
    Eigen::VectorXd alpha;
    lml_from_factor(cache.L, f, &alpha);
    Eigen::MatrixXd Kinv = Eigen::MatrixXd::Identity(N, N);
    cache.L.triangularView<Eigen::Lower>().solveInPlace(Kinv);
    cache.L.transpose().triangularView<Eigen::Upper>().solveInPlace(Kinv);
    const Eigen::MatrixXd P = alpha * alpha.transpose() - Kinv;

    Eigen::VectorXd g(lay.size());
    g[0] = (P.array() * cache.Kse.array()).sum();  // dK/dlog sf = 2 Kse
    for (Eigen::Index j = 0; j < n; ++j) {
      const double l2 = hp.lengthscales[j] * hp.lengthscales[j];
      g[1 + j] = 0.5 *
                 (P.array() * cache.Kse.array() * sqd[static_cast<size_t>(j)].array()).sum() /
                 l2;
    }
    if (lay.has_noise) g[1 + n] = hp.noise_std * hp.noise_std * P.trace();
    return g;
  };

  // first restart from the fixed heuristic point, the rest log-uniform
  auto start_point = [&](int restart, Rng& rng) -> Eigen::VectorXd {
    Eigen::VectorXd theta(lay.size());
    if (restart == 0) {
      theta[0] = 0.0;  // sf = 1
      for (Eigen::Index j = 0; j < n; ++j) theta[1 + j] = std::log(0.5 * range[j]);
      if (lay.has_noise) theta[1 + n] = std::log(1e-2);
    } else {
      for (Eigen::Index j = 0; j < lay.size(); ++j) theta[j] = rng.uniform(lo[j], hi[j]);
    }
    return theta.cwiseMax(lo).cwiseMin(hi);
  };

  Rng rng = Rng::stream(options.seed, "gp_restarts");
  double best_value = neg_inf;
  Eigen::VectorXd best_theta;
  std::string last_error;
  for (int r = 0; r < options.restarts; ++r) {
    try {
      const QnResult res = quasi_newton_maximise(objective, gradient, start_point(r, rng),
                                                 lo, hi, options.max_iter);
      if (res.value > best_value) {
        best_value = res.value;
        best_theta = res.x;
      }
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  if (!std::isfinite(best_value))
    throw std::runtime_error("fit_gp: all restarts failed" +
                             (last_error.empty() ? std::string(" (non-PD kernel matrix)")
                                                 : ": " + last_error));
  return GpModel(inputs, targets, theta_to_hp(best_theta, lay, fixed_noise));
}

}  // namespace mobo
