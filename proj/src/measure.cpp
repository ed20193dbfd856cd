#include "ucauchy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ucauchy {

PointCloudMeasure::PointCloudMeasure(std::vector<Point> points, std::vector<double> weights,
                                     double mesh, std::string label)
    : points_(std::move(points)), weights_(std::move(weights)), mesh_(mesh), label_(std::move(label)) {
  require(points_.size() == weights_.size(), "points and weights differ in length");
  require(mesh_ > 0.0 && std::isfinite(mesh_), "mesh must be positive and finite");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require(weights_[i] > 0.0 && std::isfinite(weights_[i]), "weights must be positive and finite");
    require(std::isfinite(points_[i].real()) && std::isfinite(points_[i].imag()),
            "point coordinates must be finite");
  }
  index_ = std::make_shared<const SpatialIndex>(points_);
}

double PointCloudMeasure::total_mass() const {
  double m = 0.0;
  for (double w : weights_) m += w;
  return m;
}

double PointCloudMeasure::diameter() const {
  if (points_.size() < 2) return 0.0;
  double xmin = points_[0].real(), xmax = xmin, ymin = points_[0].imag(), ymax = ymin;
  for (Point p : points_) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  return std::hypot(xmax - xmin, ymax - ymin);
}

double PointCloudMeasure::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  if (points_.size() < 2) return best;
  // Nearest other point of each atom, growing the query radius until one shows up.
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double r = std::min(best, mesh_);
    bool found = false;
    while (!found) {
      index_->for_each_within(points_[i], r, [&](std::size_t j) {
        if (j == i) return;
        found = true;
        best = std::min(best, dist(points_[i], points_[j]));
      });
      if (!found && r >= best) break;
      r *= 2.0;
    }
  }
  return best;
}

// --- generators -------------------------------------------------------------

PointCloudMeasure gen_segment(double density, Point a, Point b, double h) {
  require(density > 0.0, "gen_segment: density must be positive");
  const double len = std::abs(b - a);
  require(len > 0.0, "gen_segment: degenerate segment (a = b)");
  require(h > 0.0 && h < len, "gen_segment: need 0 < h < |b - a|");
  const auto n = static_cast<std::size_t>(std::ceil(len / h - 1e-9));
  const double spacing = len / static_cast<double>(n);
  const Point u = (b - a) / len;
  std::vector<Point> pts(n);
  std::vector<double> w(n, density * spacing);
  for (std::size_t k = 0; k < n; ++k) pts[k] = a + ((static_cast<double>(k) + 0.5) * spacing) * u;
  std::ostringstream os;
  os << "segment(density=" << density << ",a=" << a << ",b=" << b << ",h=" << h << ")";
  return {std::move(pts), std::move(w), spacing, os.str()};
}

PointCloudMeasure gen_circle(double density, Point center, double radius, std::size_t n) {
  require(density > 0.0, "gen_circle: density must be positive");
  require(radius > 0.0, "gen_circle: radius must be positive");
  require(n >= 4, "gen_circle: need at least 4 points");
  const double arc = 2.0 * std::numbers::pi * radius / static_cast<double>(n);
  std::vector<Point> pts(n);
  std::vector<double> w(n, density * arc);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts[k] = center + std::polar(radius, t);
  }
  std::ostringstream os;
  os << "circle(density=" << density << ",center=" << center << ",r=" << radius << ",n=" << n << ")";
  return {std::move(pts), std::move(w), arc, os.str()};
}

PointCloudMeasure gen_cantor(int generation) {
  require(generation >= 1 && generation <= 8, "gen_cantor: generation must be in [1, 8]");
  // Lower-left corners of the current squares.
  std::vector<Point> corners{{0.0, 0.0}};
  double side = 1.0;
  for (int g = 0; g < generation; ++g) {
    const double child = side / 4.0;
    const double off = side - child;
    std::vector<Point> next;
    next.reserve(corners.size() * 4);
    for (Point c : corners) {
      next.push_back(c);
      next.push_back(c + Point(off, 0.0));
      next.push_back(c + Point(0.0, off));
      next.push_back(c + Point(off, off));
    }
    corners = std::move(next);
    side = child;
  }
  const double w = std::ldexp(1.0, -2 * generation);
  for (Point& c : corners) c += Point(0.5 * side, 0.5 * side);
  std::vector<double> weights(corners.size(), w);
  return {std::move(corners), std::move(weights), side, "cantor(n=" + std::to_string(generation) + ")"};
}

PointCloudMeasure gen_lipschitz_graph(std::span<const std::pair<double, double>> samples,
                                      double density, double h) {
  require(samples.size() >= 2, "gen_lipschitz_graph: need at least two samples");
  require(density > 0.0 && h > 0.0, "gen_lipschitz_graph: density and h must be positive");
  std::vector<Point> pts;
  std::vector<double> w;
  double mesh = 0.0;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const auto [x0, y0] = samples[k];
    const auto [x1, y1] = samples[k + 1];
    require(x1 > x0, "gen_lipschitz_graph: x must be strictly increasing");
    require(std::isfinite((y1 - y0) / (x1 - x0)), "gen_lipschitz_graph: unbounded slope");
    const Point a(x0, y0), b(x1, y1);
    const double len = std::abs(b - a);
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / h - 1e-9)));
    const double spacing = len / static_cast<double>(n);
    mesh = std::max(mesh, spacing);
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(a + ((static_cast<double>(i) + 0.5) / static_cast<double>(n)) * (b - a));
      w.push_back(density * spacing);
    }
  }
  return {std::move(pts), std::move(w), mesh, "lipschitz_graph(pieces=" + std::to_string(samples.size() - 1) + ")"};
}

PointCloudMeasure concat(const PointCloudMeasure& a, const PointCloudMeasure& b, std::string label) {
  std::vector<Point> pts(a.points().begin(), a.points().end());
  pts.insert(pts.end(), b.points().begin(), b.points().end());
  std::vector<double> w(a.weights().begin(), a.weights().end());
  w.insert(w.end(), b.weights().begin(), b.weights().end());
  if (label.empty()) label = a.label() + "+" + b.label();
  return {std::move(pts), std::move(w), std::max(a.mesh(), b.mesh()), std::move(label)};
}

PointCloudMeasure scale_mass(const PointCloudMeasure& mu, double c) {
  require(c > 0.0, "scale_mass: factor must be positive");
  std::vector<double> w(mu.weights().begin(), mu.weights().end());
  for (double& x : w) x *= c;
  return {std::vector<Point>(mu.points().begin(), mu.points().end()), std::move(w), mu.mesh(),
          mu.label()};
}

// --- regularity ---------------------------------------------------------------

double disc_mass(const PointCloudMeasure& mu, Point center, double radius) {
  const double h = mu.mesh();
  double m = 0.0;
  mu.index().for_each_within(center, radius + 0.5 * h, [&](std::size_t i) {
    const double frac = std::clamp((radius - dist(mu.point(i), center)) / h + 0.5, 0.0, 1.0);
    m += frac * mu.weight(i);
  });
  return m;
}

std::vector<double> probe_radii(const PointCloudMeasure& mu, const ProbePlan& plan) {
  const double rmin = plan.min_radius_factor * mu.mesh();
  const double rmax = std::max(mu.diameter(), rmin);
  std::vector<double> radii;
  for (double r = rmin; r < rmax; r *= 2.0) radii.push_back(r);
  radii.push_back(rmax);
  return radii;
}

std::vector<Point> probe_support_centers(const PointCloudMeasure& mu, const ProbePlan& plan) {
  std::vector<Point> centers;
  const std::size_t n = mu.size();
  if (n == 0 || plan.support_centers == 0) return centers;
  const std::size_t stride = std::max<std::size_t>(1, n / plan.support_centers);
  for (std::size_t i = 0; i < n; i += stride) centers.push_back(mu.point(i));
  if ((n - 1) % stride != 0) centers.push_back(mu.point(n - 1));
  return centers;
}

std::vector<Point> probe_ambient_centers(const PointCloudMeasure& mu, const ProbePlan& plan) {
  std::vector<Point> centers;
  if (mu.empty() || plan.grid_per_side == 0) return centers;
  double xmin = mu.point(0).real(), xmax = xmin, ymin = mu.point(0).imag(), ymax = ymin;
  for (Point p : mu.points()) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  const std::size_t g = plan.grid_per_side;
  for (std::size_t b = 0; b < g; ++b)
    for (std::size_t a = 0; a < g; ++a) {
      const double s = (static_cast<double>(a) + 0.5) / static_cast<double>(g);
      const double t = (static_cast<double>(b) + 0.5) / static_cast<double>(g);
      centers.emplace_back(xmin + s * (xmax - xmin), ymin + t * (ymax - ymin));
    }
  return centers;
}

RegularityReport regularity(const PointCloudMeasure& mu, const ProbePlan& plan) {
  require(!mu.empty(), "regularity: empty measure");
  const auto radii = probe_radii(mu, plan);
  const auto support = probe_support_centers(mu, plan);
  const auto ambient = probe_ambient_centers(mu, plan);
  RegularityReport rep;
  rep.ad_constant = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    for (Point c : support) {
      const double ratio = disc_mass(mu, c, r) / r;
      rep.niceness = std::max(rep.niceness, ratio);
      rep.ad_constant = std::min(rep.ad_constant, ratio);
      ++rep.probe_count;
    }
    for (Point c : ambient) {
      rep.niceness = std::max(rep.niceness, disc_mass(mu, c, r) / r);
      ++rep.probe_count;
    }
  }
  return rep;
}

// --- rescaling and geometry -----------------------------------------------------

PointCloudMeasure blowup(const PointCloudMeasure& mu, Point z, double lambda) {
  require(lambda > 0.0 && std::isfinite(lambda), "blowup: lambda must be positive");
  std::vector<Point> pts(mu.size());
  std::vector<double> w(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    pts[i] = (mu.point(i) - z) / lambda;
    w[i] = mu.weight(i) / lambda;
  }
  std::ostringstream os;
  os << "blowup(" << mu.label() << ",z=" << z << ",lambda=" << lambda << ")";
  return {std::move(pts), std::move(w), mu.mesh() / lambda, os.str()};
}

double support_distance(const PointCloudMeasure& mu, Point z) {
  require(!mu.empty(), "support_distance: empty measure");
  return mu.index().nearest(z).distance;
}

double tail_sum(const PointCloudMeasure& mu, Point center, double r, double eps) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = dist(mu.point(i), center);
    if (d > r) s += mu.weight(i) / std::pow(d, 1.0 + eps);
  }
  return s;
}

double tail_bound(double niceness, double r, double eps) {
  return niceness * (1.0 + eps) / eps * std::pow(r, -eps);
}

}  // namespace ucauchy
