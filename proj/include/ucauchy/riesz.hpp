#pragma once

#include <optional>
#include <vector>

#include "ucauchy/cauchy.hpp"
#include "ucauchy/dyadic.hpp"
#include "ucauchy/testfn.hpp"

namespace ucauchy {

// Two-tent mean-zero functions s (t1 - lambda t2) with tent centres at support
// points of B(center, A*ell/2), tent radius A*ell/4, and Lipschitz constant
// exactly `lip`. Throws NoSupportError when fewer than two candidate centres
// exist. Returns at most k functions (fewer if the disc has too few pairs).
std::vector<TestFn> make_two_tent_family(const PointCloudMeasure& mu, Point center, double A,
                                         double ell, double lip, std::size_t k);

// Psi^mu_{Q,A}: support in B(z_Q, A l(Q)), Lipschitz bound l(Q)^(-3/2).
std::vector<TestFn> make_psi_family(const PointCloudMeasure& mu, const Square& q, double A,
                                    std::size_t k);
// Phi^nu_A: support in B(0, A), Lipschitz bound 1.
std::vector<TestFn> make_phi_family(const PointCloudMeasure& nu, double A, std::size_t k);

// Exact Lipschitz constant of a two-tent function (t1 - lambda t2), equal radii r.
double two_tent_lipschitz(Point c1, Point c2, double r, double lambda);

// Dense symmetric matrix, row-major.
struct Matrix {
  std::size_t n = 0;
  std::vector<double> a;
  double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
};

Matrix gram(const PointCloudMeasure& mu, std::span<const TestFn> fns);
// Largest eigenvalue of a symmetric positive semidefinite matrix by power
// iteration. Throws NumericalError without convergence.
double gram_norm(const Matrix& g, double tolerance = 1e-8, int max_iterations = 100000);

// One psi per dyadic square Q in P down to `depth` levels below P, for every Q
// meeting the support. Squares whose disc holds too little mass are skipped.
struct LatticeEntry {
  Square q;
  TestFn psi;
};
std::vector<LatticeEntry> lattice_family(const PointCloudMeasure& mu, const Square& p, int depth,
                                         double A);

struct ThetaParams {
  double A = 2.0;
  double A_prime = 4.0;
  std::size_t psi_count = 8;
  std::size_t f_candidates = 3;
};

struct ThetaReport {
  Square q;
  double theta_upper = 0.0;
  std::size_t psi_index = 0;   // maximiser within the chosen F
  double f_radius = 0.0;       // radius of the minimising F
};

// min over F = B(z_Q, A' l(Q) 2^m) of max over psi of l(Q)^(-1/2) |I(chi_F, psi)|.
ThetaReport theta(const PointCloudMeasure& mu, const Square& q, const ThetaParams& params = {});

// sum of l(Q)/l(P) over dyadic Q in P, levels 0..depth, meeting the support,
// whose theta estimate exceeds gamma. Requires 2^-depth l(P) >= 8 mesh.
double theta_carleson(const PointCloudMeasure& mu, const Square& p, double gamma, int depth,
                      const ThetaParams& params = {});

}  // namespace ucauchy
