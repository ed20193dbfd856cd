#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ucauchy/core.hpp"

namespace ucauchy {

// Position of a square in the dyadic lattice:
// [kx*2^j, (kx+1)*2^j) x [ky*2^j, (ky+1)*2^j).
struct DyadicIndex {
  int j = 0;
  std::int64_t kx = 0;
  std::int64_t ky = 0;

  friend bool operator==(const DyadicIndex&, const DyadicIndex&) = default;
  friend auto operator<=>(const DyadicIndex&, const DyadicIndex&) = default;
};

// Axis-parallel square given by centre and side length. Dyadic squares carry
// their lattice index; dilations and rescalings drop it.
class Square {
 public:
  Square(Point center, double side);

  static Square dyadic(int j, std::int64_t kx, std::int64_t ky);

  Point center() const { return center_; }
  double side() const { return side_; }
  const std::optional<DyadicIndex>& index() const { return index_; }
  bool is_dyadic() const { return index_.has_value(); }

  double xmin() const { return center_.real() - 0.5 * side_; }
  double xmax() const { return center_.real() + 0.5 * side_; }
  double ymin() const { return center_.imag() - 0.5 * side_; }
  double ymax() const { return center_.imag() + 0.5 * side_; }

  // Half-open membership [xmin, xmax) x [ymin, ymax).
  bool contains(Point z) const;
  // Closed containment of another square.
  bool contains(const Square& other) const;

  Square dilate(double factor) const;
  std::vector<Square> children() const;
  Square parent() const;

  // Affine image under z -> (z - origin) / scale.
  Square rescaled(Point origin, double scale) const;

  friend bool operator==(const Square& a, const Square& b) {
    return a.center_ == b.center_ && a.side_ == b.side_ && a.index_ == b.index_;
  }

 private:
  Point center_;
  double side_;
  std::optional<DyadicIndex> index_;
};

// Unique dyadic square of side 2^j containing z.
Square locate(Point z, int j);

// log2 of a side length that must be an exact power of two.
int dyadic_exponent(double side);

// For Q dyadic of side 2l and z1, z2 in 4Q with |z1 - z2| < l: the dyadic
// square Q' of side l containing z1. Guarantees 7Q' in 7Q and z1, z2 in 3Q'.
Square dyadicfact_witness(const Square& q, Point z1, Point z2);

// All dyadic squares of side 2^j contained in `outer` (a dyadic square with
// exponent >= j), in row-major index order.
std::vector<Square> dyadic_descendants(const Square& outer, int j);

}  // namespace ucauchy
