#pragma once

#include <Eigen/Core>

#include "mobo/rng.hpp"

namespace mobo {

struct WeightVector {
  Eigen::VectorXd weights;  // non-negative, sums to one

  void validate() const;  // throws std::invalid_argument
};

/// Per-objective normalisation bounds, rebuilt from all evaluated points each
/// iteration. The ideal point is the zero vector in normalised space.
struct NormalisationState {
  Eigen::VectorXd mins;
  Eigen::VectorXd maxs;

  static NormalisationState from_objectives(const Eigen::MatrixXd& objectives);

  /// (f - min) / (max - min) componentwise; degenerate dimensions use a unit
  /// denominator. Values outside the observed range are not clamped.
  Eigen::VectorXd normalise(const Eigen::Ref<const Eigen::VectorXd>& f) const;

  /// max - min with unit denominators on degenerate dimensions.
  Eigen::VectorXd denominators() const;

  Eigen::VectorXd ideal() const { return Eigen::VectorXd::Zero(mins.size()); }
};

/// Weighted Tchebycheff value max_i w_i (f_i - z_i).
double tchebycheff(const Eigen::Ref<const Eigen::VectorXd>& f_norm, const WeightVector& w,
                   const Eigen::Ref<const Eigen::VectorXd>& z);

/// Tchebycheff plus rho * sum_i w_i (f_i - z_i).
double augmented_tchebycheff(const Eigen::Ref<const Eigen::VectorXd>& f_norm,
                             const WeightVector& w,
                             const Eigen::Ref<const Eigen::VectorXd>& z, double rho);

/// Uniform draw from the unit simplex via sorted-uniform spacings.
WeightVector sample_weight(int num_objectives, Rng& rng);

}  // namespace mobo
