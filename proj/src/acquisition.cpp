#include "mobo/acquisition.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mobo/math.hpp"
#include "mobo/metrics.hpp"

namespace mobo {

Incumbent Incumbent::from_observations(const Eigen::MatrixXd& objectives,
                                       const WeightVector& w,
                                       const NormalisationState& norm) {
  if (objectives.rows() < 1) throw std::invalid_argument("Incumbent: no observations");
  Incumbent inc;
  inc.best_scalarised = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd z = norm.ideal();
  for (Eigen::Index i = 0; i < objectives.rows(); ++i) {
    const double g = tchebycheff(norm.normalise(objectives.row(i).transpose()), w, z);
    inc.best_scalarised = std::min(inc.best_scalarised, g);
  }
  inc.front = nondominated_filter(objectives);
  return inc;
}

double ei_closed_form(double mean, double std, double incumbent) {
  if (std < 0.0) throw std::invalid_argument("ei_closed_form: std must be >= 0");
  const double gap = incumbent - mean;
  if (std == 0.0) return std::max(0.0, gap);
  const double u = gap / std;
  const double value = gap * norm_cdf(u) + std * norm_pdf(u);
  return value > 0.0 ? value : 0.0;
}

double ei_monte_carlo(const GumbelParams& dist, double incumbent, int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("ei_monte_carlo: count must be >= 1");
  double acc = 0.0;
  for (int k = 0; k < count; ++k)
    acc += std::max(0.0, incumbent - rng.gumbel(dist.location, dist.scale));
  return acc / static_cast<double>(count);
}

double ei_monte_carlo(const GumbelParams& dist, double incumbent,
                      const Eigen::Ref<const Eigen::ArrayXd>& uniforms) {
  if (uniforms.size() < 1) throw std::invalid_argument("ei_monte_carlo: need draws");
  // g_k = alpha - beta log(-log u_k)
  const Eigen::ArrayXd g =
      dist.location - dist.scale * (-uniforms.log()).log();
  return (incumbent - g).max(0.0).mean();
}

double ei_from_samples(const Eigen::Ref<const Eigen::ArrayXd>& g_samples, double incumbent) {
  if (g_samples.size() < 1) throw std::invalid_argument("ei_from_samples: need samples");
  return (incumbent - g_samples).max(0.0).mean();
}

namespace {

void check_ehvi_args(const std::vector<Prediction>& predictions,
                     const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point) {
  const auto m = ref_point.size();
  if (static_cast<Eigen::Index>(predictions.size()) != m || front.cols() != m)
    throw std::invalid_argument("ehvi: dimension mismatch");
  for (const auto& p : predictions)
    if (p.std < 0.0) throw std::invalid_argument("ehvi: negative predictive std");
  for (Eigen::Index i = 0; i < front.rows(); ++i)
    if (!((front.row(i).transpose().array() < ref_point.array()).all()))
      throw std::invalid_argument("ehvi: front member does not strictly dominate ref_point");
}

bool all_deterministic(const std::vector<Prediction>& predictions) {
  for (const auto& p : predictions)
    if (p.std > 0.0) return false;
  return true;
}

}  // namespace

double ehvi_with_normals(const std::vector<Prediction>& predictions,
                         const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point,
                         const Eigen::MatrixXd& normals) {
  check_ehvi_args(predictions, front, ref_point);
  const auto m = ref_point.size();
  if (normals.cols() != m) throw std::invalid_argument("ehvi: normals column count must equal m");

  Eigen::VectorXd y(m);
  if (all_deterministic(predictions)) {
    for (Eigen::Index j = 0; j < m; ++j) y[j] = predictions[static_cast<size_t>(j)].mean;
    return hypervolume_improvement(front, y, ref_point);
  }

  if (m == 2) {
    const Front2d f2(front, ref_point);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < normals.rows(); ++k) {
      const double y1 = predictions[0].mean + predictions[0].std * normals(k, 0);
      const double y2 = predictions[1].mean + predictions[1].std * normals(k, 1);
      acc += f2.improvement(y1, y2);
    }
    return acc / static_cast<double>(normals.rows());
  }

  double acc = 0.0;
  for (Eigen::Index k = 0; k < normals.rows(); ++k) {
    for (Eigen::Index j = 0; j < m; ++j)
      y[j] = predictions[static_cast<size_t>(j)].mean +
             predictions[static_cast<size_t>(j)].std * normals(k, j);
    acc += hypervolume_improvement(front, y, ref_point);
  }
  return acc / static_cast<double>(normals.rows());
}

double ehvi(const std::vector<Prediction>& predictions, const Eigen::MatrixXd& front,
            const Eigen::VectorXd& ref_point, int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("ehvi: count must be >= 1");
  check_ehvi_args(predictions, front, ref_point);
  if (all_deterministic(predictions)) {
    Eigen::VectorXd y(ref_point.size());
    for (Eigen::Index j = 0; j < ref_point.size(); ++j)
      y[j] = predictions[static_cast<size_t>(j)].mean;
    return hypervolume_improvement(front, y, ref_point);
  }
  Eigen::MatrixXd normals(count, ref_point.size());
  for (Eigen::Index k = 0; k < count; ++k)
    for (Eigen::Index j = 0; j < ref_point.size(); ++j) normals(k, j) = rng.normal();
  return ehvi_with_normals(predictions, front, ref_point, normals);
}

}  // namespace mobo
