#include "ucauchy/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ucauchy {

double two_tent_lipschitz(Point c1, Point c2, double r, double lambda) {
  // Where the tents overlap on the segment between the centres their slopes add.
  if (dist(c1, c2) < 2.0 * r) return (1.0 + lambda) / r;
  return std::max(1.0, lambda) / r;
}

namespace {

double tent_mass(const PointCloudMeasure& mu, Point c, double r) {
  double m = 0.0;
  for (std::size_t i : mu.index().within(c, r)) m += (1.0 - dist(mu.point(i), c) / r) * mu.weight(i);
  return m;
}

}  // namespace

std::vector<TestFn> make_two_tent_family(const PointCloudMeasure& mu, Point center, double A,
                                         double ell, double lip, std::size_t k) {
  require(A > 1.0, "test family: A must exceed 1");
  require(ell > 0.0 && lip > 0.0, "test family: scale and Lipschitz bound must be positive");
  const double disc = 0.5 * A * ell;
  const double r = 0.25 * A * ell;
  const auto pts = mu.index().within(center, disc);

  // Greedy r/4-separated subset in index order keeps the centres spread out
  // while leaving enough of them for k independent pairs. The slack keeps
  // grid-aligned ties stable under rescaling.
  const double sep = 0.25 * r * (1.0 - 1e-9);
  std::vector<std::size_t> sel;
  for (std::size_t i : pts) {
    const bool far = std::all_of(sel.begin(), sel.end(),
                                 [&](std::size_t s) { return dist(mu.point(i), mu.point(s)) >= sep; });
    if (far) sel.push_back(i);
  }
  if (sel.size() < 2) {
    sel.clear();
    for (std::size_t i : pts)
      if (sel.empty() || mu.point(i) != mu.point(sel.front())) {
        sel.push_back(i);
        if (sel.size() == 2) break;
      }
  }
  if (sel.size() < 2)
    throw NoSupportError("test family: fewer than two distinct support points within " +
                         std::to_string(disc) + " of the centre");

  std::vector<TestFn> out;
  const std::size_t m = sel.size();
  for (std::size_t d = 1; d < m && out.size() < k; ++d)
    for (std::size_t a = 0; a + d < m && out.size() < k; ++a) {
      const Point c1 = mu.point(sel[a]), c2 = mu.point(sel[a + d]);
      const double lambda = tent_mass(mu, c1, r) / tent_mass(mu, c2, r);
      const double s = lip / two_tent_lipschitz(c1, c2, r, lambda);
      out.emplace_back(std::vector<Tent>{{c1, r, s}, {c2, r, -s * lambda}}, lip, center, A * ell,
                       mu.label());
    }
  return out;
}

std::vector<TestFn> make_psi_family(const PointCloudMeasure& mu, const Square& q, double A,
                                    std::size_t k) {
  const double ell = q.side();
  return make_two_tent_family(mu, q.center(), A, ell, std::pow(ell, -1.5), k);
}

std::vector<TestFn> make_phi_family(const PointCloudMeasure& nu, double A, std::size_t k) {
  return make_two_tent_family(nu, {0.0, 0.0}, A, 1.0, 1.0, k);
}

Matrix gram(const PointCloudMeasure& mu, std::span<const TestFn> fns) {
  std::vector<SparseFn> s;
  s.reserve(fns.size());
  for (const TestFn& f : fns) s.push_back(f.sample(mu));
  Matrix g{fns.size(), std::vector<double>(fns.size() * fns.size(), 0.0)};
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i; j < s.size(); ++j) g(i, j) = g(j, i) = inner(mu, s[i], s[j]);
  return g;
}

double gram_norm(const Matrix& g, double tolerance, int max_iterations) {
  const std::size_t n = g.n;
  if (n == 0) return 0.0;
  std::vector<double> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
  double prev = -1.0;
  for (int it = 0; it < max_iterations; ++it) {
    double nv = 0.0;
    for (double x : v) nv += x * x;
    nv = std::sqrt(nv);
    for (double& x : v) x /= nv;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += g(i, j) * v[j];
      w[i] = s;
    }
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += v[i] * w[i];
    if (rho == 0.0) return 0.0;
    if (prev >= 0.0 && std::abs(rho - prev) <= tolerance * std::abs(rho)) return rho;
    prev = rho;
    v.swap(w);
  }
  throw NumericalError("gram_norm: power iteration did not converge");
}

std::vector<LatticeEntry> lattice_family(const PointCloudMeasure& mu, const Square& p, int depth,
                                         double A) {
  require(p.is_dyadic(), "lattice_family: P must be dyadic");
  require(depth >= 0, "lattice_family: depth must be non-negative");
  std::vector<LatticeEntry> out;
  for (int level = 0; level <= depth; ++level)
    for (const Square& q : dyadic_descendants(p, p.index()->j - level)) {
      if (mu.index().within(q).empty()) continue;
      try {
        auto fam = make_psi_family(mu, q, A, 1);
        out.push_back({q, std::move(fam.front())});
      } catch (const NoSupportError&) {
      }
    }
  return out;
}

ThetaReport theta(const PointCloudMeasure& mu, const Square& q, const ThetaParams& params) {
  require(params.A > 1.0 && params.A_prime >= params.A, "theta: need A' >= A > 1");
  require(params.psi_count >= 1 && params.f_candidates >= 1, "theta: empty dictionary");
  const double ell = q.side();
  const auto fam = make_psi_family(mu, q, params.A, params.psi_count);
  std::vector<SparseFn> samples;
  std::vector<std::size_t> support;  // union of the psi supports
  for (const TestFn& f : fam) {
    samples.push_back(f.sample(mu));
    support.insert(support.end(), samples.back().index.begin(), samples.back().index.end());
  }
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  ThetaReport rep{q, std::numeric_limits<double>::infinity(), 0, 0.0};
  const double norm = 1.0 / std::sqrt(ell);
  std::vector<Complex> field(mu.size());
  for (std::size_t m = 0; m < params.f_candidates; ++m) {
    const double radius = params.A_prime * ell * std::ldexp(1.0, static_cast<int>(m));
    const auto f_idx = mu.index().within(q.center(), radius);
    // C(chi_F) at each atom of the psi supports, diagonal excluded
    for (std::size_t i : support) {
      Complex s = 0.0;
      for (std::size_t j : f_idx)
        if (j != i) s += kernel_delta(mu.point(i) - mu.point(j), 0.0) * mu.weight(j);
      field[i] = s;
    }
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t t = 0; t < samples.size(); ++t) {
      Complex v = 0.0;
      for (std::size_t a = 0; a < samples[t].size(); ++a) {
        const std::size_t i = samples[t].index[a];
        v += field[i] * (samples[t].value[a] * mu.weight(i));
      }
      const double val = norm * std::abs(v);
      if (val > best) {
        best = val;
        arg = t;
      }
    }
    if (best < rep.theta_upper) {
      rep.theta_upper = best;
      rep.psi_index = arg;
      rep.f_radius = radius;
    }
  }
  return rep;
}

double theta_carleson(const PointCloudMeasure& mu, const Square& p, double gamma, int depth,
                      const ThetaParams& params) {
  require(p.is_dyadic(), "theta_carleson: P must be dyadic");
  require(depth >= 0, "theta_carleson: depth must be non-negative");
  require(std::ldexp(p.side(), -depth) >= 8.0 * mu.mesh(),
          "theta_carleson: depth goes below the 8*mesh resolution floor");
  double total = 0.0;
  for (int level = 0; level <= depth; ++level)
    for (const Square& q : dyadic_descendants(p, p.index()->j - level)) {
      if (mu.index().within(q).empty()) continue;
      double t = 0.0;
      try {
        t = theta(mu, q, params).theta_upper;
      } catch (const NoSupportError&) {
        continue;
      }
      if (t > gamma) total += q.side() / p.side();
    }
  return total;
}

}  // namespace ucauchy
