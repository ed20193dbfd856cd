#pragma once

#include <span>
#include <vector>

#include "ucauchy/measure.hpp"
#include "ucauchy/testfn.hpp"

namespace ucauchy {

// K(z) = 1/z; rejects z = 0.
Complex kernel(Complex z);
// K_delta(z) = conj(z) / max(delta, |z|)^2, with K_delta(0) = 0 for every delta >= 0.
Complex kernel_delta(Complex z, double delta);

// Regularisation radius used wherever the caller does not pick one.
inline double default_delta(const PointCloudMeasure& mu) { return 4.0 * mu.mesh(); }

struct FieldSample {
  std::vector<Point> targets;
  std::vector<Complex> values;
};

// C_delta(f mu)(z) = sum_i K_delta(z - p_i) f_i w_i at each target.
FieldSample transform_delta(const PointCloudMeasure& mu, std::span<const double> f, double delta,
                            std::span<const Point> targets);

// (3 C0 / delta)^(1/2) ||f||
double pointwise_bound(double niceness, double delta, double f_l2);

// sum_{i<j} K_delta(p_i - p_j) (f_j g_i - f_i g_j) w_i w_j, summed over the
// atoms where f or g is nonzero. Exactly antisymmetric in (f, g).
Complex bilinear_I_delta(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g,
                         double delta);
Complex bilinear_I_delta(const PointCloudMeasure& mu, std::span<const double> f,
                         std::span<const double> g, double delta);

// <C_delta(f), g> = sum_i g_i w_i sum_{j != i} K_delta(p_i - p_j) f_j w_j.
// Algebraically equal to bilinear_I_delta, cheaper when g has small support.
Complex pairing(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g, double delta);

struct NormOptions {
  double tolerance = 1e-6;   // relative change of the top Ritz value
  int max_iterations = 400;
  std::uint64_t seed = 1;
};

struct NormResult {
  double value = 0.0;
  int iterations = 0;
};

// Largest singular value of f -> (sum_{j != i} K_delta(p_i - p_j) f_j w_j)_i
// on L^2(mu). Throws NumericalError if the iteration cap is hit.
NormResult operator_norm(const PointCloudMeasure& mu, double delta, const NormOptions& opt = {});

// sum_i [K(z - p_i) - K(z0 - p_i)] w_i. Both points must keep 2*mesh from the support.
Complex tilde_cauchy_one(const PointCloudMeasure& mu, Point z, Point z0);

// sum_i |K(z - p_i) - K(z0 - p_i)| w_i scaled by d0/|z - z0|, where d0 is the
// distance of {z, z0} to the support.
double l1_away_ratio(const PointCloudMeasure& mu, Point z, Point z0);

// Three-term pairing <C~(1), psi> with phi the indicator of the disc U.
Complex tilde_pairing(const PointCloudMeasure& mu, const SparseFn& psi, Point z0, Point u_center,
                      double u_radius, double delta);

struct Window {
  Point center;
  double radius = 1.0;
};

struct KappaEstimate {
  Complex value;
  double spread = 0.0;
  Point base_point;
  bool unstable = false;
  std::vector<Complex> samples;  // one ratio per (U, psi) pairing
};

// delta <= 0 selects default_delta(mu).
KappaEstimate kappa_estimate(const PointCloudMeasure& mu, Point z0, const Window& window,
                             double delta = 0.0);

// A point well off the support, transported covariantly by blowups.
Point far_base_point(const PointCloudMeasure& mu);

// max over the dictionary of |<C~(1), psi>| / (||psi||_2 mass(supp psi)^(1/2)).
double reflectionless_defect(const PointCloudMeasure& mu, std::span<const TestFn> dictionary,
                             double delta = 0.0);

// |v^2 - 2 kappa v| with v = tilde_cauchy_one(mu, z, z0).
double resolvent_residual(const PointCloudMeasure& mu, Point z, Complex kappa, Point z0);

// Normalised residual of the three-point resolvent identity.
double resolve_identity_residual(Complex z, Complex xi, Complex omega);

}  // namespace ucauchy
