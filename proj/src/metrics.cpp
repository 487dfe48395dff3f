#include "mobo/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mobo {

bool weakly_dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
  return (a.array() <= b.array()).all();
}

bool dominates(const Eigen::Ref<const Eigen::VectorXd>& a,
               const Eigen::Ref<const Eigen::VectorXd>& b) {
  return (a.array() <= b.array()).all() && (a.array() < b.array()).any();
}

std::vector<Eigen::Index> nondominated_indices(const Eigen::MatrixXd& points) {
  const auto N = points.rows();
  std::vector<Eigen::Index> order(static_cast<size_t>(N));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  // lexicographic order; any dominator of a point precedes it here, and ties
  // keep the original order so the first duplicate survives
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      if (points(a, j) < points(b, j)) return true;
      if (points(a, j) > points(b, j)) return false;
    }
    return false;
  });

  std::vector<Eigen::Index> archive;
  for (const Eigen::Index idx : order) {
    bool dominated = false;
    for (const Eigen::Index kept : archive) {
      if (weakly_dominates(points.row(kept).transpose(), points.row(idx).transpose())) {
        dominated = true;
        break;
      }
    }
    if (!dominated) archive.push_back(idx);
  }
  std::sort(archive.begin(), archive.end());
  return archive;
}

Eigen::MatrixXd nondominated_filter(const Eigen::MatrixXd& points) {
  const auto keep = nondominated_indices(points);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(keep.size()), points.cols());
  for (size_t i = 0; i < keep.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points.row(keep[i]);
  return out;
}

namespace detail {

double hv2d_tolerant(std::vector<std::array<double, 2>> pts, double ref1, double ref2) {
  std::sort(pts.begin(), pts.end());
  double hv = 0.0;
  double best_y = ref2;
  for (const auto& p : pts) {
    if (p[0] >= ref1 || p[1] >= best_y) continue;
    hv += (ref1 - p[0]) * (best_y - p[1]);
    best_y = p[1];
  }
  return hv;
}

double hv3d_tolerant(std::vector<std::array<double, 3>> pts, const Eigen::VectorXd& ref) {
  // slice along the third objective; each slab contributes the 2-D area of
  // the points seen so far times its thickness
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
  double hv = 0.0;
  std::vector<std::array<double, 2>> seen;
  for (size_t k = 0; k < pts.size(); ++k) {
    if (pts[k][2] >= ref[2]) break;
    seen.push_back({pts[k][0], pts[k][1]});
    const double z_hi = (k + 1 < pts.size()) ? std::min(pts[k + 1][2], ref[2]) : ref[2];
    const double thickness = z_hi - pts[k][2];
    if (thickness > 0.0) hv += thickness * hv2d_tolerant(seen, ref[0], ref[1]);
  }
  return hv;
}

}  // namespace detail

double hypervolume(const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point) {
  const auto m = ref_point.size();
  if (front.cols() != m) throw std::invalid_argument("hypervolume: dimension mismatch");
  if (front.rows() == 0) return 0.0;
  for (Eigen::Index i = 0; i < front.rows(); ++i)
    if (!((front.row(i).transpose().array() < ref_point.array()).all()))
      throw std::invalid_argument("hypervolume: front point does not dominate the reference point");

  if (m == 2) {
    std::vector<std::array<double, 2>> pts(static_cast<size_t>(front.rows()));
    for (Eigen::Index i = 0; i < front.rows(); ++i) pts[static_cast<size_t>(i)] = {front(i, 0), front(i, 1)};
    return detail::hv2d_tolerant(std::move(pts), ref_point[0], ref_point[1]);
  }
  if (m == 3) {
    std::vector<std::array<double, 3>> pts(static_cast<size_t>(front.rows()));
    for (Eigen::Index i = 0; i < front.rows(); ++i)
      pts[static_cast<size_t>(i)] = {front(i, 0), front(i, 1), front(i, 2)};
    return detail::hv3d_tolerant(std::move(pts), ref_point);
  }
  throw std::invalid_argument("hypervolume: only 2 or 3 objectives supported");
}

double hypervolume_improvement(const Eigen::MatrixXd& front,
                               const Eigen::Ref<const Eigen::VectorXd>& p,
                               const Eigen::VectorXd& ref_point) {
  const auto m = ref_point.size();
  if (p.size() != m || front.cols() != m)
    throw std::invalid_argument("hypervolume_improvement: dimension mismatch");
  if (!((p.array() < ref_point.array()).all())) return 0.0;

  if (m == 2) {
    Front2d f2(front, ref_point);
    return f2.improvement(p[0], p[1]);
  }
  if (m == 3) {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(static_cast<size_t>(front.rows()) + 1);
    for (Eigen::Index i = 0; i < front.rows(); ++i)
      pts.push_back({front(i, 0), front(i, 1), front(i, 2)});
    const double base = detail::hv3d_tolerant(pts, ref_point);
    pts.push_back({p[0], p[1], p[2]});
    return std::max(0.0, detail::hv3d_tolerant(std::move(pts), ref_point) - base);
  }
  throw std::invalid_argument("hypervolume_improvement: only 2 or 3 objectives supported");
}

Front2d::Front2d(const Eigen::MatrixXd& front, const Eigen::VectorXd& ref_point) {
  if (front.cols() != 2 || ref_point.size() != 2)
    throw std::invalid_argument("Front2d: two objectives required");
  ref1_ = ref_point[0];
  ref2_ = ref_point[1];
  std::vector<std::array<double, 2>> pts;
  pts.reserve(static_cast<size_t>(front.rows()));
  for (Eigen::Index i = 0; i < front.rows(); ++i) {
    if (front(i, 0) < ref1_ && front(i, 1) < ref2_) pts.push_back({front(i, 0), front(i, 1)});
  }
  std::sort(pts.begin(), pts.end());
  // keep the staircase: strictly decreasing f2 along ascending f1
  for (const auto& p : pts) {
    if (pts_.empty() || p[1] < pts_.back()[1]) pts_.push_back(p);
  }
  hv_ = detail::hv2d_tolerant(pts_, ref1_, ref2_);
}

double Front2d::improvement(double f1, double f2) const {
  if (f1 >= ref1_ || f2 >= ref2_) return 0.0;
  // first staircase point with x > f1; its predecessor caps the free y-range
  auto it = std::upper_bound(pts_.begin(), pts_.end(), std::array<double, 2>{f1, ref2_});
  double y_cover = (it == pts_.begin()) ? ref2_ : (*(it - 1))[1];
  if (f2 >= y_cover) return 0.0;  // dominated by the staircase
  double area = 0.0;
  double x = f1;
  for (; it != pts_.end(); ++it) {
    const double xe = std::min((*it)[0], ref1_);
    area += (xe - x) * (y_cover - f2);
    x = xe;
    if (x >= ref1_) return area;
    y_cover = (*it)[1];
    if (y_cover <= f2) return area;
  }
  area += (ref1_ - x) * (y_cover - f2);
  return area;
}

ParetoArchive::ParetoArchive(Eigen::VectorXd ref_point) : ref_(std::move(ref_point)) {
  if (ref_.size() < 2) throw std::invalid_argument("ParetoArchive: need at least 2 objectives");
}

bool ParetoArchive::add(const Eigen::Ref<const Eigen::VectorXd>& objectives) {
  if (objectives.size() != ref_.size())
    throw std::invalid_argument("ParetoArchive::add: dimension mismatch");
  if (!((objectives.array() < ref_.array()).all())) return false;
  for (const auto& p : points_)
    if (weakly_dominates(p, objectives)) return false;
  std::erase_if(points_, [&](const Eigen::VectorXd& p) { return weakly_dominates(objectives, p); });
  points_.emplace_back(objectives);
  return true;
}

Eigen::MatrixXd ParetoArchive::points_matrix() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(points_.size()), ref_.size());
  for (size_t i = 0; i < points_.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = points_[i];
  return out;
}

double ParetoArchive::hypervolume() const {
  if (points_.empty()) return 0.0;
  return mobo::hypervolume(points_matrix(), ref_);
}

}  // namespace mobo
