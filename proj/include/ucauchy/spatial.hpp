#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ucauchy/core.hpp"
#include "ucauchy/dyadic.hpp"

namespace ucauchy {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

// Static k-d tree over a fixed point set. Queries are exact: they agree with a
// linear scan, ties in nearest() broken by the lowest point index.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  explicit SpatialIndex(std::span<const Point> points, std::size_t leaf_size = 8);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  Point point(std::size_t i) const { return points_[i]; }

  Neighbor nearest(Point z) const;

  // Indices inside the closed disc |p - center| <= radius, ascending.
  std::vector<std::size_t> within(Point center, double radius) const;
  // Indices inside the half-open square, ascending.
  std::vector<std::size_t> within(const Square& q) const;

  // Visits every index in the closed disc (unordered).
  void for_each_within(Point center, double radius,
                       const std::function<void(std::size_t)>& visit) const;

  // True iff some point lies strictly closer than `radius` to `center`.
  bool any_closer_than(Point center, double radius) const;

 private:
  struct Node {
    double xmin, xmax, ymin, ymax;
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end, int depth);
  void nearest_rec(std::int32_t node, Point z, Neighbor& best, double& best_d2) const;

  std::vector<Point> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_ = 8;
};

}  // namespace ucauchy
