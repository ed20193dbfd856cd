#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ucauchy/core.hpp"
#include "ucauchy/spatial.hpp"

namespace ucauchy {

// Weighted planar point cloud standing in for a measure by midpoint
// quadrature: integrals become weighted sums over the points. Immutable.
class PointCloudMeasure {
 public:
  PointCloudMeasure(std::vector<Point> points, std::vector<double> weights, double mesh,
                    std::string label = {});

  std::span<const Point> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  Point point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  double mesh() const { return mesh_; }
  const std::string& label() const { return label_; }

  double total_mass() const;
  // Diagonal of the bounding box; 0 for a single point.
  double diameter() const;
  const SpatialIndex& index() const { return *index_; }

  // Smallest distance between two distinct points (infinity below two points).
  double min_separation() const;

 private:
  std::vector<Point> points_;
  std::vector<double> weights_;
  double mesh_;
  std::string label_;
  std::shared_ptr<const SpatialIndex> index_;
};

// --- generators -------------------------------------------------------------

PointCloudMeasure gen_segment(double density, Point a, Point b, double h);
PointCloudMeasure gen_circle(double density, Point center, double radius, std::size_t n);
PointCloudMeasure gen_cantor(int generation);
// Arclength-weighted points along the polyline through (x, y) samples, each
// piece split into cells of length at most h.
PointCloudMeasure gen_lipschitz_graph(std::span<const std::pair<double, double>> samples,
                                      double density, double h);
// Union of two clouds; mesh is the coarser of the two.
PointCloudMeasure concat(const PointCloudMeasure& a, const PointCloudMeasure& b,
                         std::string label = {});
// Multiplies every weight by c > 0.
PointCloudMeasure scale_mass(const PointCloudMeasure& mu, double c);

// --- regularity ---------------------------------------------------------------

struct ProbePlan {
  std::size_t support_centers = 256;  // subsample of support points
  std::size_t grid_per_side = 16;     // ambient grid over the bounding box
  double min_radius_factor = 4.0;     // radii start at this multiple of mesh
};

struct RegularityReport {
  double niceness = 0.0;      // max of mu(B(z,r))/r over all probes
  double ad_constant = 0.0;   // min of mu(B(z,r))/r over support-centred probes
  std::size_t probe_count = 0;
};

// Mass of the closed disc, each atom spread over a radial cell of width mesh.
double disc_mass(const PointCloudMeasure& mu, Point center, double radius);

// Dyadic radius ladder from min_radius_factor*mesh up to the diameter.
std::vector<double> probe_radii(const PointCloudMeasure& mu, const ProbePlan& plan);
std::vector<Point> probe_support_centers(const PointCloudMeasure& mu, const ProbePlan& plan);
std::vector<Point> probe_ambient_centers(const PointCloudMeasure& mu, const ProbePlan& plan);

RegularityReport regularity(const PointCloudMeasure& mu, const ProbePlan& plan = {});

// --- rescaling and geometry -----------------------------------------------------

// lambda-blowup at z: points (p - z)/lambda, weights w/lambda, mesh h/lambda.
PointCloudMeasure blowup(const PointCloudMeasure& mu, Point z, double lambda);

double support_distance(const PointCloudMeasure& mu, Point z);

// Sum over points with |p - center| > r of w / |p - center|^(1+eps).
double tail_sum(const PointCloudMeasure& mu, Point center, double r, double eps);
// C0 (1+eps)/eps r^-eps.
double tail_bound(double niceness, double r, double eps);

}  // namespace ucauchy
