#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace mobo {

/// a <= b in every component (covers equality).
bool weakly_dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b);

/// a <= b in every component and a != b (minimisation).
bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
               const Eigen::Ref<const Eigen::VectorXd>& b);

/// Indices (original order) of points not weakly dominated by any other;
/// exact duplicates keep their first occurrence. Lexicographic scan, so a
/// point is only ever tested against the surviving archive.
std::vector<Eigen::Index> nondominated_indices(const Eigen::MatrixXd& points);

Eigen::MatrixXd nondominated_filter(const Eigen::MatrixXd& points);

/// Lebesgue measure of the region dominated by the front and bounded by
/// ref_point. Exact: sorted sweep for two objectives, slicing for three.
/// Every front member must strictly dominate ref_point.
double hypervolume(const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point);

/// hypervolume(front with p added) - hypervolume(front); clips p against the
/// reference box, so any p is accepted and the result is >= 0.
double hypervolume_improvement(const Eigen::MatrixXd& front,
                               const Eigen::Ref<const Eigen::VectorXd>& p,
                               const Eigen::VectorXd& ref_point);

/// Two-objective front prepared for many improvement queries (used by the
/// Monte Carlo hypervolume acquisition).
class Front2d {
 public:
  Front2d(const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point);

  double hypervolume() const { return hv_; }
  double improvement(double f1, double f2) const;

 private:
  std::vector<std::array<double, 2>> pts_;  // ascending f1, descending f2
  double ref1_, ref2_;
  double hv_ = 0.0;
};

/// Mutable archive of mutually nondominated points that strictly dominate the
/// reference point. Points failing either condition are rejected on add.
class ParetoArchive {
 public:
  explicit ParetoArchive(Eigen::VectorXd ref_point);

  /// Returns true if the point was archived.
  bool add(const Eigen::Ref<const Eigen::VectorXd>& objectives);

  const std::vector<Eigen::VectorXd>& points() const { return points_; }
  Eigen::MatrixXd points_matrix() const;
  const Eigen::VectorXd& ref_point() const { return ref_; }
  double hypervolume() const;

 private:
  std::vector<Eigen::VectorXd> points_;
  Eigen::VectorXd ref_;
};

namespace detail {
/// Sweep tolerant to dominated or out-of-box points (they contribute nothing).
double hv2d_tolerant(std::vector<std::array<double, 2>> pts, double ref1, double ref2);
double hv3d_tolerant(std::vector<std::array<double, 3>> pts, const Eigen::VectorXd& ref);
}  // namespace detail

}  // namespace mobo
