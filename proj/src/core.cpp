#include "ucauchy/core.hpp"

#include <algorithm>

namespace ucauchy {

double segment_projection(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return 0.0;
  const double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
  return std::clamp(t, 0.0, 1.0);
}

double segment_distance(Point p, Point a, Point b) {
  const double t = segment_projection(p, a, b);
  return std::abs(p - (a + t * (b - a)));
}

}  // namespace ucauchy
