#include "ucauchy/badsquares.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ucauchy {

namespace {

// Greedy eta-net of the given support indices, index order.
std::vector<Point> coarse_net(const PointCloudMeasure& mu, const std::vector<std::size_t>& idx,
                              double eta) {
  const double sep = eta * (1.0 - 1e-9);  // keeps ties stable under rescaling
  const auto cell = [&](Point z) {
    return std::pair{static_cast<std::int64_t>(std::floor(z.real() / eta)),
                     static_cast<std::int64_t>(std::floor(z.imag() / eta))};
  };
  const auto key = [](std::int64_t x, std::int64_t y) { return (x * 0x9E3779B97F4A7C15LL) ^ y; };
  std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
  std::vector<Point> out;
  for (std::size_t i : idx) {
    const Point p = mu.point(i);
    const auto [cx, cy] = cell(p);
    bool covered = false;
    for (int dx = -1; dx <= 1 && !covered; ++dx)
      for (int dy = -1; dy <= 1 && !covered; ++dy) {
        const auto it = grid.find(key(cx + dx, cy + dy));
        if (it == grid.end()) continue;
        covered = std::any_of(it->second.begin(), it->second.end(),
                              [&](std::size_t k) { return dist(out[k], p) < sep; });
      }
    if (covered) continue;
    grid[key(cx, cy)].push_back(out.size());
    out.push_back(p);
  }
  return out;
}

// Upper bound on the distance from any point of any segment between two
// candidates to the candidate set: strip half-width about the principal axis
// plus the largest gap between projections.
double flat_clearance_bound(const std::vector<Point>& pts) {
  Point mean = 0.0;
  for (Point p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double sxx = 0, syy = 0, sxy = 0;
  for (Point p : pts) {
    const Point d = p - mean;
    sxx += d.real() * d.real();
    syy += d.imag() * d.imag();
    sxy += d.real() * d.imag();
  }
  const Point dir = std::polar(1.0, 0.5 * std::atan2(2 * sxy, sxx - syy));
  double w = 0.0;
  std::vector<double> t;
  t.reserve(pts.size());
  for (Point p : pts) {
    const Point local = (p - mean) * std::conj(dir);
    t.push_back(local.real());
    w = std::max(w, std::abs(local.imag()));
  }
  std::sort(t.begin(), t.end());
  double g = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) g = std::max(g, t[k] - t[k - 1]);
  return std::hypot(0.5 * g, 2.0 * w);
}

// Maximum-clearance point of [zeta, xi]: the step grid, then three rounds of
// 64-fold local refinement around the best sample.
BadWitness deepest_point(const PointCloudMeasure& mu, const Square& q, Point zeta, Point xi,
                         double step) {
  const double len = dist(zeta, xi);
  const auto at = [&](double s) { return zeta + (xi - zeta) * (std::clamp(s, 0.0, len) / len); };
  const auto clearance = [&](double s) { return mu.index().nearest(at(s)).distance; };
  double best_s = 0.0, best = -1.0;
  for (double s = 0.0; s <= len; s += step)
    if (const double c = clearance(s); c > best) best = c, best_s = s;
  for (int round = 0; round < 3; ++round) {
    const double lo = best_s - step, h = step / 32.0;
    for (int k = 0; k <= 64; ++k)
      if (const double c = clearance(lo + k * h); c > best) best = c, best_s = std::clamp(lo + k * h, 0.0, len);
    step = h;
  }
  return {q, zeta, xi, at(best_s), best};
}

}  // namespace

double bad_floor(const PointCloudMeasure& mu, double tau) { return 8.0 * mu.mesh() / tau; }

std::optional<BadWitness> is_bad(const PointCloudMeasure& mu, const Square& q, double tau) {
  require(tau > 0.0 && tau < 1.0 / 16.0, "is_bad: tau must lie in (0, 1/16)");
  const double ell = q.side();
  require(ell >= bad_floor(mu, tau), "is_bad: l(Q) is below the resolution floor 8 mesh / tau");
  const double T = tau * ell + mu.mesh();
  const double step = 0.5 * tau * ell;

  const auto cand = coarse_net(mu, mu.index().within(q.center(), 10.0 * ell), 0.25 * tau * ell);
  if (cand.size() < 2) return std::nullopt;
  // Flat and gap-free: no segment point can reach clearance T.
  if (flat_clearance_bound(cand) < T) return std::nullopt;

  const auto clearance = [&](Point z) { return mu.index().nearest(z).distance; };
  for (std::size_t a = 0; a < cand.size(); ++a)
    for (std::size_t b = a + 1; b < cand.size(); ++b) {
      const Point zeta = cand[a], xi = cand[b];
      const double len = dist(zeta, xi);
      if (len < 0.5 * ell * (1.0 - 1e-12)) continue;  // diametrical pairs survive rounding
      const auto n = static_cast<std::size_t>(std::floor(len / step));
      // Samples k*step; a sample at clearance c rules out the next ones
      // closer than T - c because the distance function is 1-Lipschitz.
      for (std::size_t k = 1; k <= n;) {
        const Point z = zeta + (xi - zeta) * (static_cast<double>(k) * step / len);
        const double c = clearance(z);
        if (c >= T) return deepest_point(mu, q, zeta, xi, step);
        k += std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((T - c) / step)));
      }
    }
  return std::nullopt;
}

std::vector<Square> bad_family(const PointCloudMeasure& mu, const Square& p, double tau, int depth) {
  require(p.is_dyadic(), "bad_family: P must be dyadic");
  require(depth >= 0, "bad_family: depth must be non-negative");
  require(std::ldexp(p.side(), -depth) >= bad_floor(mu, tau),
          "bad_family: depth goes below the resolution floor 8 mesh / tau");
  std::vector<Square> out;
  for (int level = 0; level <= depth; ++level)
    for (const Square& q : dyadic_descendants(p, p.index()->j - level))
      if (is_bad(mu, q, tau)) out.push_back(q);
  return out;
}

double carleson_norm(const std::vector<Square>& family, const Square& p) {
  double s = 0.0;
  for (const Square& q : family) s += q.side();
  return s / p.side();
}

InductiveBadReport inductive_implies_bad(const PointCloudMeasure& mu, const LengthLedger& ledger,
                                         double tau) {
  InductiveBadReport rep;
  for (const LedgerEntry& e : ledger.inductive) {
    if (e.q.side() < bad_floor(mu, tau)) {
      rep.excluded.push_back(e.q);
      continue;
    }
    ++rep.checked;
    if (is_bad(mu, e.q, tau))
      ++rep.flagged;
    else
      rep.missed.push_back(e.q);
  }
  return rep;
}

}  // namespace ucauchy
