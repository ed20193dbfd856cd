#include "ucauchy/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ucauchy {

namespace {

double box_dist2(double xmin, double xmax, double ymin, double ymax, Point z) {
  const double dx = z.real() < xmin ? xmin - z.real() : (z.real() > xmax ? z.real() - xmax : 0.0);
  const double dy = z.imag() < ymin ? ymin - z.imag() : (z.imag() > ymax ? z.imag() - ymax : 0.0);
  return dx * dx + dy * dy;
}

}  // namespace

SpatialIndex::SpatialIndex(std::span<const Point> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<std::uint32_t>(i);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / leaf_size_ + 2);
    build(0, static_cast<std::uint32_t>(points_.size()), 0);
  }
}

std::int32_t SpatialIndex::build(std::uint32_t begin, std::uint32_t end, int depth) {
  Node node{};
  node.begin = begin;
  node.end = end;
  node.xmin = node.ymin = std::numeric_limits<double>::infinity();
  node.xmax = node.ymax = -std::numeric_limits<double>::infinity();
  for (std::uint32_t k = begin; k < end; ++k) {
    const Point p = points_[order_[k]];
    node.xmin = std::min(node.xmin, p.real());
    node.xmax = std::max(node.xmax, p.real());
    node.ymin = std::min(node.ymin, p.imag());
    node.ymax = std::max(node.ymax, p.imag());
  }
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_) return id;

  const bool split_x = (node.xmax - node.xmin) >= (node.ymax - node.ymin);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = split_x ? points_[a].real() : points_[a].imag();
                     const double vb = split_x ? points_[b].real() : points_[b].imag();
                     return va < vb || (va == vb && a < b);
                   });
  const std::int32_t l = build(begin, mid, depth + 1);
  const std::int32_t r = build(mid, end, depth + 1);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

void SpatialIndex::nearest_rec(std::int32_t id, Point z, Neighbor& best, double& best_d2) const {
  const Node& n = nodes_[id];
  if (box_dist2(n.xmin, n.xmax, n.ymin, n.ymax, z) > best_d2) return;
  if (n.left < 0) {
    for (std::uint32_t k = n.begin; k < n.end; ++k) {
      const std::uint32_t i = order_[k];
      const double d2 = dist2(points_[i], z);
      if (d2 < best_d2 || (d2 == best_d2 && i < best.index)) {
        best_d2 = d2;
        best.index = i;
      }
    }
    return;
  }
  const Node& a = nodes_[n.left];
  const Node& b = nodes_[n.right];
  const double da = box_dist2(a.xmin, a.xmax, a.ymin, a.ymax, z);
  const double db = box_dist2(b.xmin, b.xmax, b.ymin, b.ymax, z);
  if (da <= db) {
    nearest_rec(n.left, z, best, best_d2);
    nearest_rec(n.right, z, best, best_d2);
  } else {
    nearest_rec(n.right, z, best, best_d2);
    nearest_rec(n.left, z, best, best_d2);
  }
}

Neighbor SpatialIndex::nearest(Point z) const {
  require(!points_.empty(), "nearest: empty spatial index");
  Neighbor best{std::numeric_limits<std::size_t>::max(), 0.0};
  double best_d2 = std::numeric_limits<double>::infinity();
  nearest_rec(0, z, best, best_d2);
  best.distance = std::abs(points_[best.index] - z);
  return best;
}

void SpatialIndex::for_each_within(Point center, double radius,
                                   const std::function<void(std::size_t)>& visit) const {
  if (points_.empty() || !(radius >= 0.0)) return;
  // Slightly widened prune so rounding never drops a boundary point.
  const double r2 = radius * radius * (1.0 + 1e-12);
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (box_dist2(n.xmin, n.xmax, n.ymin, n.ymax, center) > r2) continue;
    if (n.left < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k) {
        const std::uint32_t i = order_[k];
        if (std::abs(points_[i] - center) <= radius) visit(i);
      }
      continue;
    }
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
}

std::vector<std::size_t> SpatialIndex::within(Point center, double radius) const {
  std::vector<std::size_t> out;
  for_each_within(center, radius, [&](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> SpatialIndex::within(const Square& q) const {
  std::vector<std::size_t> out;
  if (points_.empty()) return out;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (n.xmax < q.xmin() || n.xmin >= q.xmax() || n.ymax < q.ymin() || n.ymin >= q.ymax()) continue;
    if (n.left < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k)
        if (q.contains(points_[order_[k]])) out.push_back(order_[k]);
      continue;
    }
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool SpatialIndex::any_closer_than(Point center, double radius) const {
  if (points_.empty()) return false;
  const double r2 = radius * radius;
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[stack.back()];
    stack.pop_back();
    if (box_dist2(n.xmin, n.xmax, n.ymin, n.ymax, center) >= r2) continue;
    if (n.left < 0) {
      for (std::uint32_t k = n.begin; k < n.end; ++k)
        if (dist2(points_[order_[k]], center) < r2) return true;
      continue;
    }
    stack.push_back(n.right);
    stack.push_back(n.left);
  }
  return false;
}

}  // namespace ucauchy
