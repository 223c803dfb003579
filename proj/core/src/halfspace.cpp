#include "fdhomog/halfspace.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "fdhomog/error.hpp"

namespace fdhomog {
namespace {

inline double cross(Point2 a, Point2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double dot(Point2 a, Point2 b) noexcept { return a.x * b.x + a.y * b.y; }

// 0 for angles in [0, pi), 1 for [pi, 2 pi).
inline int half_of(Point2 d) noexcept { return (d.y < 0.0 || (d.y == 0.0 && d.x < 0.0)) ? 1 : 0; }

inline Point2 offset(Point2 p, Point2 origin) noexcept { return {p.x - origin.x, p.y - origin.y}; }

}  // namespace

void AngularSweep::build(Point2 point, std::span<const Point2> cloud) {
  if (cloud.size() > std::numeric_limits<std::uint32_t>::max())
    throw Error(ErrorCode::SizeLimit, "cloud too large for the angular sweep");
  order_.clear();
  group_begin_.clear();
  window_end_.clear();
  coincident_.clear();

  for (std::uint32_t k = 0; k < cloud.size(); ++k) {
    Point2 d = offset(cloud[k], point);
    if (d.x == 0.0 && d.y == 0.0) {
      coincident_.push_back(k);
    } else {
      order_.push_back(k);
    }
  }

  auto dir = [&](std::uint32_t k) { return offset(cloud[k], point); };
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    Point2 da = dir(a), db = dir(b);
    int ha = half_of(da), hb = half_of(db);
    if (ha != hb) return ha < hb;
    double c = cross(da, db);
    if (c != 0.0) return c > 0.0;
    return a < b;  // same direction: keep index order for a canonical layout
  });

  const auto total = static_cast<std::uint32_t>(order_.size());
  for (std::uint32_t i = 0; i < total; ++i) {
    if (i == 0) {
      group_begin_.push_back(0);
      continue;
    }
    Point2 lead = dir(order_[group_begin_.back()]);
    Point2 cur = dir(order_[i]);
    bool same = half_of(lead) == half_of(cur) && cross(lead, cur) == 0.0;
    if (!same) group_begin_.push_back(i);
  }
  const auto groups = static_cast<std::uint32_t>(group_begin_.size());
  group_begin_.push_back(total);

  // Window of group g: groups g, g+1, ... (cyclic) whose direction lies
  // strictly less than pi counter-clockwise from g's direction.
  window_end_.resize(groups);
  std::uint32_t e = 1;
  for (std::uint32_t g = 0; g < groups; ++g) {
    e = std::max(e, g + 1);
    Point2 lead = dir(order_[group_begin_[g]]);
    while (e < g + groups && cross(lead, dir(order_[group_begin_[e % groups]])) > 0.0) ++e;
    window_end_[g] = e < groups ? group_begin_[e] : total + group_begin_[e - groups];
  }
  prefix_.assign(total + 1, 0);
}

std::uint64_t AngularSweep::min_halfplane_weight(std::span<const std::uint32_t> weights,
                                                 std::uint64_t extra_at_point) const {
  std::uint64_t at_point = extra_at_point;
  for (std::uint32_t k : coincident_) at_point += weights[k];

  const std::size_t total = order_.size();
  std::uint64_t* prefix = prefix_.data();
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < total; ++i) {
    run += weights[order_[i]];
    prefix[i + 1] = run;
  }
  const std::uint64_t around = run;

  std::uint64_t best_open = 0;
  const std::size_t groups = window_end_.size();
  for (std::size_t g = 0; g < groups; ++g) {
    const std::uint32_t s = group_begin_[g];
    const std::uint32_t e = window_end_[g];
    std::uint64_t in_window = e <= total ? prefix[e] - prefix[s] : around - prefix[s] + prefix[e - total];
    best_open = std::max(best_open, in_window);
  }
  return at_point + around - best_open;
}

std::uint64_t AngularSweep::min_halfplane_count() const {
  std::vector<std::uint32_t> ones(order_.size() + coincident_.size(), 1u);
  // Indices refer to the original cloud, whose size is order_ + coincident_.
  return min_halfplane_weight(ones);
}

double halfspace_depth_2d(Point2 point, std::span<const Point2> cloud) {
  if (cloud.empty()) throw Error(ErrorCode::InvalidArgument, "halfspace depth needs a nonempty cloud");
  AngularSweep sweep;
  sweep.build(point, cloud);
  return static_cast<double>(sweep.min_halfplane_count()) / static_cast<double>(cloud.size());
}

double halfspace_depth_2d_oracle(Point2 point, std::span<const Point2> cloud) {
  if (cloud.empty()) throw Error(ErrorCode::InvalidArgument, "halfspace depth needs a nonempty cloud");
  if (cloud.size() > kHalfspaceOracleLimit)
    throw Error(ErrorCode::SizeLimit, "oracle accepts at most " + std::to_string(kHalfspaceOracleLimit) + " points");

  std::size_t at_point = 0;
  for (const Point2& p : cloud) at_point += (p == point) ? 1 : 0;

  std::size_t best = cloud.size() - at_point;
  bool any_line = false;
  for (const Point2& pi : cloud) {
    if (pi == point) continue;
    any_line = true;
    Point2 axis = offset(pi, point);
    std::size_t left = 0, right = 0, forward = 0, backward = 0;
    for (const Point2& pk : cloud) {
      if (pk == point) continue;
      Point2 d = offset(pk, point);
      double c = cross(axis, d);
      if (c > 0.0) {
        ++left;
      } else if (c < 0.0) {
        ++right;
      } else if (dot(axis, d) > 0.0) {
        ++forward;
      } else {
        ++backward;
      }
    }
    best = std::min({best, left + forward, left + backward, right + forward, right + backward});
  }
  if (!any_line) best = 0;
  return static_cast<double>(at_point + best) / static_cast<double>(cloud.size());
}

}  // namespace fdhomog
