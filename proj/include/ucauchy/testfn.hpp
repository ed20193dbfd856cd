#pragma once

#include <string>
#include <vector>

#include "ucauchy/measure.hpp"

namespace ucauchy {

// A function sampled on the atoms of a measure, stored by nonzero entries.
// Indices are ascending.
struct SparseFn {
  std::vector<std::size_t> index;
  std::vector<double> value;

  std::size_t size() const { return index.size(); }
  bool empty() const { return index.empty(); }
};

// Samples of an arbitrary dense vector, keeping nonzeros.
SparseFn sparse_from_dense(std::span<const double> dense);
std::vector<double> dense_from_sparse(const SparseFn& f, std::size_t n);

// Indicator of the closed disc B(center, radius) on the atoms of mu.
SparseFn disc_indicator(const PointCloudMeasure& mu, Point center, double radius);

// t(w) = coeff * max(0, 1 - |w - center| / radius)
struct Tent {
  Point center;
  double radius = 1.0;
  double coeff = 1.0;
};

// Finite sum of tents. Elements of the test families are two-tent
// combinations normalised to a prescribed Lipschitz bound.
class TestFn {
 public:
  TestFn() = default;
  TestFn(std::vector<Tent> atoms, double lip_bound, Point support_center, double support_radius,
         std::string mean_zero_wrt = {});

  const std::vector<Tent>& atoms() const { return atoms_; }
  double lip_bound() const { return lip_bound_; }
  Point support_center() const { return support_center_; }
  double support_radius() const { return support_radius_; }
  const std::string& mean_zero_wrt() const { return mean_zero_wrt_; }

  double operator()(Point z) const;
  SparseFn sample(const PointCloudMeasure& mu) const;

  // Transport under w -> (w - z)/lambda with values multiplied by amplitude.
  TestFn rescaled(Point z, double lambda, double amplitude) const;

 private:
  std::vector<Tent> atoms_;
  double lip_bound_ = 0.0;
  Point support_center_;
  double support_radius_ = 0.0;
  std::string mean_zero_wrt_;
};

// Weighted sums over the atoms.
double integral(const PointCloudMeasure& mu, const SparseFn& f);
double l1_norm(const PointCloudMeasure& mu, const SparseFn& f);
double l2_norm(const PointCloudMeasure& mu, const SparseFn& f);
double l2_norm(const PointCloudMeasure& mu, std::span<const double> f);
double support_mass(const PointCloudMeasure& mu, const SparseFn& f);
double inner(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g);

}  // namespace ucauchy
