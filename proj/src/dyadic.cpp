#include "ucauchy/dyadic.hpp"

#include <cmath>
#include <sstream>

namespace ucauchy {

Square::Square(Point center, double side) : center_(center), side_(side) {
  require(side > 0.0 && std::isfinite(side), "square side must be positive and finite");
}

Square Square::dyadic(int j, std::int64_t kx, std::int64_t ky) {
  const double s = std::ldexp(1.0, j);
  Square q({(static_cast<double>(kx) + 0.5) * s, (static_cast<double>(ky) + 0.5) * s}, s);
  q.index_ = DyadicIndex{j, kx, ky};
  return q;
}

bool Square::contains(Point z) const {
  return z.real() >= xmin() && z.real() < xmax() && z.imag() >= ymin() && z.imag() < ymax();
}

bool Square::contains(const Square& other) const {
  return other.xmin() >= xmin() && other.xmax() <= xmax() && other.ymin() >= ymin() &&
         other.ymax() <= ymax();
}

Square Square::dilate(double factor) const {
  require(factor > 0.0, "dilation factor must be positive");
  return Square(center_, side_ * factor);
}

std::vector<Square> Square::children() const {
  require(is_dyadic(), "children() needs a dyadic square");
  const auto& d = *index_;
  return {dyadic(d.j - 1, 2 * d.kx, 2 * d.ky), dyadic(d.j - 1, 2 * d.kx + 1, 2 * d.ky),
          dyadic(d.j - 1, 2 * d.kx, 2 * d.ky + 1), dyadic(d.j - 1, 2 * d.kx + 1, 2 * d.ky + 1)};
}

namespace {
std::int64_t floor_div2(std::int64_t k) { return k >= 0 ? k / 2 : -((-k + 1) / 2); }
}  // namespace

Square Square::parent() const {
  require(is_dyadic(), "parent() needs a dyadic square");
  const auto& d = *index_;
  return dyadic(d.j + 1, floor_div2(d.kx), floor_div2(d.ky));
}

Square Square::rescaled(Point origin, double scale) const {
  require(scale > 0.0, "rescaling factor must be positive");
  return Square((center_ - origin) / scale, side_ / scale);
}

Square locate(Point z, int j) {
  const double s = std::ldexp(1.0, j);
  const auto kx = static_cast<std::int64_t>(std::floor(z.real() / s));
  const auto ky = static_cast<std::int64_t>(std::floor(z.imag() / s));
  return Square::dyadic(j, kx, ky);
}

int dyadic_exponent(double side) {
  int e = 0;
  const double m = std::frexp(side, &e);
  require(m == 0.5, "side length is not a power of two");
  return e - 1;
}

Square dyadicfact_witness(const Square& q, Point z1, Point z2) {
  require(q.is_dyadic(), "dyadicfact_witness: Q must be dyadic");
  const Square q4 = q.dilate(4.0);
  const double ell = 0.5 * q.side();
  if (!q4.contains(z1) || !q4.contains(z2) || !(dist(z1, z2) < ell)) {
    std::ostringstream os;
    os << "dyadicfact_witness: need z1, z2 in 4Q and |z1-z2| < " << ell << "; got |z1-z2| = "
       << dist(z1, z2) << ", z1 in 4Q: " << q4.contains(z1) << ", z2 in 4Q: " << q4.contains(z2);
    throw ConfigError(os.str());
  }
  Square w = locate(z1, q.index()->j - 1);
  const Square w3 = w.dilate(3.0);
  if (!q.dilate(7.0).contains(w.dilate(7.0)) || !w3.contains(z1) || !w3.contains(z2)) {
    throw std::logic_error("dyadicfact_witness: containment failed");
  }
  return w;
}

std::vector<Square> dyadic_descendants(const Square& outer, int j) {
  require(outer.is_dyadic(), "dyadic_descendants: outer must be dyadic");
  const auto& d = *outer.index();
  require(j <= d.j, "dyadic_descendants: scale finer than outer expected");
  const std::int64_t n = std::int64_t{1} << (d.j - j);
  std::vector<Square> out;
  out.reserve(static_cast<std::size_t>(n * n));
  for (std::int64_t b = 0; b < n; ++b)
    for (std::int64_t a = 0; a < n; ++a) out.push_back(Square::dyadic(j, d.kx * n + a, d.ky * n + b));
  return out;
}

}  // namespace ucauchy
