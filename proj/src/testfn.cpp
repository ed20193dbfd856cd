#include "ucauchy/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ucauchy {

SparseFn sparse_from_dense(std::span<const double> dense) {
  SparseFn f;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) {
      f.index.push_back(i);
      f.value.push_back(dense[i]);
    }
  return f;
}

std::vector<double> dense_from_sparse(const SparseFn& f, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) out.at(f.index[k]) = f.value[k];
  return out;
}

SparseFn disc_indicator(const PointCloudMeasure& mu, Point center, double radius) {
  SparseFn f;
  f.index = mu.index().within(center, radius);
  f.value.assign(f.index.size(), 1.0);
  return f;
}

TestFn::TestFn(std::vector<Tent> atoms, double lip_bound, Point support_center,
               double support_radius, std::string mean_zero_wrt)
    : atoms_(std::move(atoms)),
      lip_bound_(lip_bound),
      support_center_(support_center),
      support_radius_(support_radius),
      mean_zero_wrt_(std::move(mean_zero_wrt)) {
  for (const Tent& t : atoms_) require(t.radius > 0.0, "tent radius must be positive");
}

double TestFn::operator()(Point z) const {
  double v = 0.0;
  for (const Tent& t : atoms_) {
    const double s = 1.0 - dist(z, t.center) / t.radius;
    if (s > 0.0) v += t.coeff * s;
  }
  return v;
}

SparseFn TestFn::sample(const PointCloudMeasure& mu) const {
  // Accumulate per atom in ascending index order so the sum order matches
  // operator() and sampling is deterministic.
  std::map<std::size_t, double> acc;
  for (const Tent& t : atoms_)
    for (std::size_t i : mu.index().within(t.center, t.radius)) acc.emplace(i, 0.0);
  SparseFn f;
  for (auto& [i, v] : acc) {
    v = (*this)(mu.point(i));
    if (v != 0.0) {
      f.index.push_back(i);
      f.value.push_back(v);
    }
  }
  return f;
}

TestFn TestFn::rescaled(Point z, double lambda, double amplitude) const {
  require(lambda > 0.0, "rescaled: lambda must be positive");
  std::vector<Tent> atoms = atoms_;
  for (Tent& t : atoms) {
    t.center = (t.center - z) / lambda;
    t.radius /= lambda;
    t.coeff *= amplitude;
  }
  return {std::move(atoms), lip_bound_ * std::abs(amplitude) * lambda, (support_center_ - z) / lambda,
          support_radius_ / lambda, mean_zero_wrt_};
}

double integral(const PointCloudMeasure& mu, const SparseFn& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f.value[k] * mu.weight(f.index[k]);
  return s;
}

double l1_norm(const PointCloudMeasure& mu, const SparseFn& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += std::abs(f.value[k]) * mu.weight(f.index[k]);
  return s;
}

double l2_norm(const PointCloudMeasure& mu, const SparseFn& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f.value[k] * f.value[k] * mu.weight(f.index[k]);
  return std::sqrt(s);
}

double l2_norm(const PointCloudMeasure& mu, std::span<const double> f) {
  require(f.size() == mu.size(), "l2_norm: sample count differs from measure size");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i] * mu.weight(i);
  return std::sqrt(s);
}

double support_mass(const PointCloudMeasure& mu, const SparseFn& f) {
  double s = 0.0;
  for (std::size_t i : f.index) s += mu.weight(i);
  return s;
}

double inner(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g) {
  double s = 0.0;
  std::size_t a = 0, b = 0;
  while (a < f.size() && b < g.size()) {
    if (f.index[a] < g.index[b]) {
      ++a;
    } else if (g.index[b] < f.index[a]) {
      ++b;
    } else {
      s += f.value[a] * g.value[b] * mu.weight(f.index[a]);
      ++a;
      ++b;
    }
  }
  return s;
}

}  // namespace ucauchy
