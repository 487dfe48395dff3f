#include "mobo/scalarise.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace mobo {

void WeightVector::validate() const {
  if (weights.size() < 1) throw std::invalid_argument("WeightVector: empty");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("WeightVector: negative component");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw std::invalid_argument("WeightVector: components must sum to 1");
}

NormalisationState NormalisationState::from_objectives(const Eigen::MatrixXd& objectives) {
  if (objectives.rows() < 1)
    throw std::invalid_argument("NormalisationState: need at least one evaluated point");
  NormalisationState s;
  s.mins = objectives.colwise().minCoeff();
  s.maxs = objectives.colwise().maxCoeff();
  return s;
}

Eigen::VectorXd NormalisationState::denominators() const {
  Eigen::VectorXd den = maxs - mins;
  for (Eigen::Index i = 0; i < den.size(); ++i)
    if (den[i] <= 0.0) den[i] = 1.0;
  return den;
}

Eigen::VectorXd NormalisationState::normalise(
    const Eigen::Ref<const Eigen::VectorXd>& f) const {
  if (f.size() != mins.size())
    throw std::invalid_argument("NormalisationState::normalise: dimension mismatch");
  return (f - mins).cwiseQuotient(denominators());
}

double tchebycheff(const Eigen::Ref<const Eigen::VectorXd>& f_norm, const WeightVector& w,
                   const Eigen::Ref<const Eigen::VectorXd>& z) {
  if (f_norm.size() != w.weights.size() || f_norm.size() != z.size())
    throw std::invalid_argument("tchebycheff: dimension mismatch");
  return (w.weights.array() * (f_norm - z).array()).maxCoeff();
}

double augmented_tchebycheff(const Eigen::Ref<const Eigen::VectorXd>& f_norm,
                             const WeightVector& w,
                             const Eigen::Ref<const Eigen::VectorXd>& z, double rho) {
  if (rho < 0.0) throw std::invalid_argument("augmented_tchebycheff: rho must be >= 0");
  const double base = tchebycheff(f_norm, w, z);
  return base + rho * (w.weights.array() * (f_norm - z).array()).sum();
}

WeightVector sample_weight(int num_objectives, Rng& rng) {
  if (num_objectives < 2) throw std::invalid_argument("sample_weight: need m >= 2");
  std::vector<double> cuts(static_cast<size_t>(num_objectives) - 1);
  for (auto& c : cuts) c = rng.uniform();
  std::sort(cuts.begin(), cuts.end());
  WeightVector w;
  w.weights.resize(num_objectives);
  double prev = 0.0;
  for (int i = 0; i + 1 < num_objectives; ++i) {
    w.weights[i] = cuts[static_cast<size_t>(i)] - prev;
    prev = cuts[static_cast<size_t>(i)];
  }
  w.weights[num_objectives - 1] = 1.0 - prev;
  return w;
}

}  // namespace mobo
