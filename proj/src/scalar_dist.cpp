#include "mobo/scalar_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mobo/math.hpp"
#include "mobo/optimizers.hpp"

namespace mobo {

ScalarisedPosterior ScalarisedPosterior::from_predictions(const Eigen::VectorXd& means,
                                                          const Eigen::VectorXd& stds,
                                                          const Eigen::VectorXd& weights,
                                                          const Eigen::VectorXd& ideal) {
  if (means.size() != stds.size() || means.size() != weights.size() ||
      means.size() != ideal.size())
    throw std::invalid_argument("ScalarisedPosterior: dimension mismatch");
  ScalarisedPosterior sp;
  sp.shifted_means = weights.array() * (means - ideal).array();
  sp.scaled_stds = weights.array() * stds.array();
  // floor keeps the density well defined when a GP reports near-zero variance
  for (Eigen::Index i = 0; i < sp.scaled_stds.size(); ++i) {
    const double floor = 1e-9 * std::max(1.0, std::abs(sp.shifted_means[i]));
    if (sp.scaled_stds[i] < floor) sp.scaled_stds[i] = floor;
  }
  return sp;
}

void ScalarisedPosterior::validate() const {
  if (shifted_means.size() < 1 || shifted_means.size() != scaled_stds.size())
    throw std::invalid_argument("ScalarisedPosterior: invalid sizes");
  if (!(scaled_stds.array() > 0.0).all())
    throw std::invalid_argument("ScalarisedPosterior: scaled stds must be > 0");
}

double exact_log_pdf(const ScalarisedPosterior& sp, double g) {
  sp.validate();
  const auto m = sp.shifted_means.size();
  Eigen::ArrayXd u = (g - sp.shifted_means.array()) / sp.scaled_stds.array();
  Eigen::ArrayXd log_cdf(m), log_pdf(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    log_cdf[i] = log_norm_cdf(u[i]);
    log_pdf[i] = log_norm_pdf(u[i]);
  }
  const double cdf_sum = log_cdf.sum();
  // log sum_i exp(log phi_i - log s_i + sum_{j != i} log Phi_j)
  double max_term = -std::numeric_limits<double>::infinity();
  Eigen::ArrayXd terms(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    terms[i] = log_pdf[i] - std::log(sp.scaled_stds[i]) + (cdf_sum - log_cdf[i]);
    max_term = std::max(max_term, terms[i]);
  }
  if (!std::isfinite(max_term)) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) acc += std::exp(terms[i] - max_term);
  return max_term + std::log(acc);
}

double exact_pdf(const ScalarisedPosterior& sp, double g) {
  return std::exp(exact_log_pdf(sp, g));
}

double exact_cdf(const ScalarisedPosterior& sp, double g) {
  sp.validate();
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sp.shifted_means.size(); ++i)
    acc += log_norm_cdf((g - sp.shifted_means[i]) / sp.scaled_stds[i]);
  return std::exp(acc);
}

Eigen::ArrayXd sample(const ScalarisedPosterior& sp, int count, Rng& rng) {
  sp.validate();
  if (count < 1) throw std::invalid_argument("sample: count must be >= 1");
  const auto m = sp.shifted_means.size();
  Eigen::ArrayXd out(count);
  for (int k = 0; k < count; ++k) {
    double best = sp.shifted_means[0] + sp.scaled_stds[0] * rng.normal();
    for (Eigen::Index i = 1; i < m; ++i)
      best = std::max(best, sp.shifted_means[i] + sp.scaled_stds[i] * rng.normal());
    out[k] = best;
  }
  return out;
}

void sample_with_normals(const ScalarisedPosterior& sp, const Eigen::MatrixXd& normals,
                         Eigen::ArrayXd& out) {
  sp.validate();
  if (normals.cols() != sp.shifted_means.size())
    throw std::invalid_argument("sample_with_normals: column count must equal m");
  out = sp.shifted_means[0] + sp.scaled_stds[0] * normals.col(0).array();
  for (Eigen::Index i = 1; i < sp.shifted_means.size(); ++i)
    out = out.max(sp.shifted_means[i] + sp.scaled_stds[i] * normals.col(i).array());
}

GumbelParams fit_gumbel(const Eigen::Ref<const Eigen::ArrayXd>& samples) {
  const auto N = samples.size();
  if (N < 10) throw std::invalid_argument("fit_gumbel: need at least 10 samples");
  const double gbar = samples.mean();
  const double sd = std::sqrt((samples - gbar).square().mean());
  if (sd < 1e-12 * std::max(1.0, std::abs(gbar)))
    throw std::invalid_argument("fit_gumbel: constant samples");

  double beta = sd * std::sqrt(6.0) / kPi;  // method-of-moments start
  double prev_delta = 0.0;
  bool converged = false;
  Eigen::ArrayXd w(N);
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::ArrayXd a = -samples / beta;
    const double a_max = a.maxCoeff();
    w = (a - a_max).exp();
    const double weighted_mean = (samples * w).sum() / w.sum();
    double beta_new = gbar - weighted_mean;
    double delta = beta_new - beta;
    if (iter > 0 && delta * prev_delta < 0.0) {
      beta_new = beta + 0.5 * delta;  // damp oscillation
      delta = beta_new - beta;
    }
    prev_delta = delta;
    const bool done = std::abs(delta) < 1e-8 * std::abs(beta_new);
    beta = beta_new;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged) throw std::runtime_error("fit_gumbel: fixed point did not converge");

  const Eigen::ArrayXd a = -samples / beta;
  const double a_max = a.maxCoeff();
  const double alpha = -beta * (std::log((a - a_max).exp().mean()) + a_max);
  return {alpha, beta};
}

double gumbel_pdf(const GumbelParams& p, double g) {
  if (!(p.scale > 0.0)) throw std::invalid_argument("gumbel_pdf: scale must be > 0");
  const double t = (g - p.location) / p.scale;
  return std::exp(-(t + std::exp(-t))) / p.scale;
}

double gumbel_cdf(const GumbelParams& p, double g) {
  if (!(p.scale > 0.0)) throw std::invalid_argument("gumbel_cdf: scale must be > 0");
  return std::exp(-std::exp(-(g - p.location) / p.scale));
}

double gumbel_log_likelihood(const GumbelParams& p,
                             const Eigen::Ref<const Eigen::ArrayXd>& samples) {
  const Eigen::ArrayXd t = (samples - p.location) / p.scale;
  return -static_cast<double>(samples.size()) * std::log(p.scale) - t.sum() -
         (-t).exp().sum();
}

LaplaceParams laplace_fit(const ScalarisedPosterior& sp) {
  sp.validate();
  const double s_max = sp.scaled_stds.maxCoeff();
  const double lo = sp.shifted_means.minCoeff() - 6.0 * s_max;
  const double hi = sp.shifted_means.maxCoeff() + 6.0 * s_max;
  const double h = 1e-5 * s_max;

  auto dlog = [&](double g) {
    return (exact_log_pdf(sp, g + h) - exact_log_pdf(sp, g - h)) / (2.0 * h);
  };
  const double mode = safeguarded_newton_1d(dlog, lo, hi, 1e-8);

  // second difference with a wider step; exact for the quadratic log-density core
  const double h2 = 1.2e-4 * s_max;
  const double precision = -(exact_log_pdf(sp, mode + h2) - 2.0 * exact_log_pdf(sp, mode) +
                             exact_log_pdf(sp, mode - h2)) /
                           (h2 * h2);
  if (!(precision > 0.0)) throw std::runtime_error("laplace_fit: non-concave at mode");
  return {mode, precision};
}

double laplace_pdf(const LaplaceParams& p, double g) {
  if (!(p.precision > 0.0)) throw std::invalid_argument("laplace_pdf: precision must be > 0");
  const double z = (g - p.mode) * std::sqrt(p.precision);
  return std::sqrt(p.precision) * norm_pdf(z);
}

namespace {

// sup_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|) over the sorted sample
template <typename Cdf>
double ks_distance(const Eigen::ArrayXd& sorted, Cdf cdf) {
  const auto n = sorted.size();
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double F = cdf(sorted[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    d = std::max(d, std::max(std::abs(hi - F), std::abs(F - lo)));
  }
  return d;
}

}  // namespace

GaussianityReport gaussianity_report(const ScalarisedPosterior& sp, int sample_count,
                                     Rng& rng) {
  if (sample_count < 10000)
    throw std::invalid_argument("gaussianity_report: need sample_count >= 10000");
  Eigen::ArrayXd g = sample(sp, sample_count, rng);

  GaussianityReport rep;
  rep.sample_count = sample_count;
  rep.sample_mean = g.mean();
  const Eigen::ArrayXd centred = g - rep.sample_mean;
  const double m2 = centred.square().mean();
  const double m3 = centred.cube().mean();
  rep.sample_std = std::sqrt(m2);
  rep.skewness = m3 / std::pow(m2, 1.5);
  rep.gumbel = fit_gumbel(g);

  std::sort(g.data(), g.data() + g.size());
  rep.ks_gaussian = ks_distance(
      g, [&](double x) { return norm_cdf((x - rep.sample_mean) / rep.sample_std); });
  rep.ks_gumbel = ks_distance(g, [&](double x) { return gumbel_cdf(rep.gumbel, x); });
  return rep;
}

std::vector<std::pair<std::string, double>> GaussianityReport::to_flat_kv() const {
  return {{"sample_count", static_cast<double>(sample_count)},
          {"sample_mean", sample_mean},
          {"sample_std", sample_std},
          {"skewness", skewness},
          {"ks_gaussian", ks_gaussian},
          {"ks_gumbel", ks_gumbel},
          {"gumbel_location", gumbel.location},
          {"gumbel_scale", gumbel.scale}};
}

}  // namespace mobo
