#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fdhomog {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Exact Tukey depth of `point` in `cloud`: the smallest fraction of cloud
/// points in a closed halfplane containing `point`. O(n log n) angular sweep.
double halfspace_depth_2d(Point2 point, std::span<const Point2> cloud);

/// Brute-force reference for halfspace_depth_2d, O(n^2). For every line
/// through `point` and a cloud point it counts the four halfplanes obtained
/// by tilting that line infinitesimally either way. Limited to 2000 points.
double halfspace_depth_2d_oracle(Point2 point, std::span<const Point2> cloud);

inline constexpr std::size_t kHalfspaceOracleLimit = 2000;

/// Angular order of a cloud around a fixed query point, reusable for any
/// multiplicity weighting of the same cloud.
///
/// Depth count = (weight coincident with the query) + (total weight of the
/// remaining points) - (largest weight in an open half-plane through the
/// query). Open half-planes are enumerated as the windows [theta_g, theta_g + pi)
/// starting at each distinct direction g; window bounds depend only on the
/// geometry, so they are computed once in build().
class AngularSweep {
 public:
  void build(Point2 point, std::span<const Point2> cloud);

  /// Weighted closed-halfplane minimum. `weights` is indexed like the cloud
  /// given to build(); `extra_at_point` adds mass located at the query itself.
  std::uint64_t min_halfplane_weight(std::span<const std::uint32_t> weights,
                                     std::uint64_t extra_at_point = 0) const;

  /// Unit weights.
  std::uint64_t min_halfplane_count() const;

 private:
  std::vector<std::uint32_t> order_;        // non-coincident cloud indices sorted by angle
  std::vector<std::uint32_t> group_begin_;  // offsets into order_ of each distinct direction (+ sentinel)
  std::vector<std::uint32_t> window_end_;   // per group: end offset (in the doubled order) of its window
  std::vector<std::uint32_t> coincident_;   // cloud indices equal to the query
  mutable std::vector<std::uint64_t> prefix_;
};

}  // namespace fdhomog
