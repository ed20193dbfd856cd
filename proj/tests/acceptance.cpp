// Acceptance suite: one PASS/FAIL line per criterion. Optional arguments pick
// a subset of criteria by number.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "ucauchy/badsquares.hpp"
#include "ucauchy/cauchy.hpp"
#include "ucauchy/curve.hpp"
#include "ucauchy/riesz.hpp"

using namespace ucauchy;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[violated: " << what << "] ";
    }
  }
};

// Shared fixtures.
PointCloudMeasure line_segment() { return gen_segment(1.0, {-50.0, 0.0}, {50.0, 0.0}, 0.01); }
PointCloudMeasure unit_circle() { return gen_circle(1.0, {0.0, 0.0}, 1.0, 10000); }
PointCloudMeasure sawtooth() {
  std::vector<std::pair<double, double>> saw;
  for (int k = 0; k <= 20; ++k) saw.emplace_back(0.5 * k, (k % 2) * 0.5);
  return gen_lipschitz_graph(saw, 1.0, 0.005);
}

// Continuum C~(1) for a density-c segment [a, b] on the real axis.
Complex segment_tilde(double a, double b, double c, Complex z, Complex z0) {
  auto f = [&](Complex w) { return std::log(w - a) - std::log(w - b); };
  return c * (f(z) - f(z0));
}

void c1_resolve(Outcome& o) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  int n = 0;
  while (n < 10000) {
    const Complex z(u(rng), u(rng)), xi(u(rng), u(rng)), om(u(rng), u(rng));
    if (xi == 0.0 || om == 0.0 || z == xi || z == om || xi == om) continue;
    worst = std::max(worst, resolve_identity_residual(z, xi, om));
    ++n;
  }
  o.detail << "max residual " << worst << " over " << n << " triples";
  o.expect(worst < 1e-10, "residual < 1e-10");
}

void c2_tail(Outcome& o) {
  const std::vector<PointCloudMeasure> fixtures{line_segment(), unit_circle(), gen_cantor(5), sawtooth()};
  std::size_t checks = 0, violations = 0;
  for (const auto& mu : fixtures) {
    const double c0 = regularity(mu).niceness;
    for (Point ctr : {mu.point(0), mu.point(mu.size() / 2)})
      for (int a = 0; a < 10; ++a) {
        const double r = 4 * mu.mesh() * std::pow(mu.diameter() / (4 * mu.mesh()), a / 9.0);
        for (int e = 0; e < 10; ++e) {
          const double eps = 0.05 + 0.2 * e;
          ++checks;
          if (tail_sum(mu, ctr, r, eps) > tail_bound(c0, r, eps)) ++violations;
        }
      }
  }
  o.detail << violations << " violations in " << checks << " checks (4 fixtures, 2 centres, 10x10 grid)";
  o.expect(violations == 0, "zero violations");
}

void c3_pointwise(Outcome& o) {
  const std::vector<PointCloudMeasure> fixtures{line_segment(), unit_circle(), gen_cantor(5), sawtooth()};
  std::mt19937_64 rng(303);
  std::normal_distribution<double> g;
  std::size_t checks = 0, violations = 0;
  double worst = 0.0;
  for (const auto& mu : fixtures) {
    const double c0 = regularity(mu).niceness, delta = default_delta(mu);
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (Point p : mu.points())
      xmin = std::min(xmin, p.real()), xmax = std::max(xmax, p.real()), ymin = std::min(ymin, p.imag()),
      ymax = std::max(ymax, p.imag());
    std::uniform_real_distribution<double> ux(xmin - 1, xmax + 1), uy(ymin - 1, ymax + 1);
    std::vector<Point> targets(100);
    for (auto& t : targets) t = {ux(rng), uy(rng)};
    for (int k = 0; k < 10; ++k) {
      std::vector<double> f(mu.size());
      for (double& x : f) x = g(rng);
      const double bound = pointwise_bound(c0, delta, l2_norm(mu, f));
      for (Complex v : transform_delta(mu, f, delta, targets).values) {
        ++checks;
        worst = std::max(worst, std::abs(v) / bound);
        if (std::abs(v) > bound) ++violations;
      }
    }
  }
  o.detail << violations << " violations in " << checks << " checks, max |C f| / bound " << worst;
  o.expect(violations == 0, "zero violations");
}

void c4_line_values(Outcome& o) {
  const auto seg = line_segment();
  const Point z0(0.0, 2.0);
  const Complex up = tilde_cauchy_one(seg, {0.0, 1.0}, z0), down = tilde_cauchy_one(seg, {0.0, -1.0}, z0);
  const Complex up_oracle = segment_tilde(-50, 50, 1.0, {0.0, 1.0}, z0);
  const Complex down_oracle = segment_tilde(-50, 50, 1.0, {0.0, -1.0}, z0);
  const auto k = kappa_estimate(seg, z0, Window{{0.0, 0.0}, 1.0});
  // jump across the line towards e = e^{i theta} = i: C~(-y e) - C~(y e) = -2 pi c e^{-i theta}
  const Complex e = std::polar(1.0, pi / 2);
  const Complex jump = tilde_cauchy_one(seg, -1.0 * e, z0) - tilde_cauchy_one(seg, 1.0 * e, z0);
  const Complex jump_expected = -2.0 * pi * std::conj(e);
  o.detail << "C~(i)=" << up << " (oracle " << up_oracle << "), C~(-i)=" << down << " (oracle " << down_oracle
           << "), kappa=" << k.value << " spread " << k.spread << ", jump " << jump;
  o.expect(std::abs(up) <= 0.05, "|C~(i)| <= 0.05");
  o.expect(std::abs(down - Complex(0, 2 * pi)) <= 0.05 * 2 * pi, "C~(-i) within 5% of 2 pi i");
  o.expect(std::abs(up - up_oracle) <= 1e-3 && std::abs(down - down_oracle) <= 1e-3, "agreement with the log oracle");
  o.expect(std::abs(k.value - Complex(0, pi)) <= 0.05 * pi, "kappa within 5% of i pi");
  o.expect(k.spread < 0.1 * std::abs(k.value), "kappa spread < 10%");
  o.expect(std::abs(jump - jump_expected) <= 0.05 * std::abs(jump_expected), "jump within 5% of -2 pi c e^{-i theta}");
}

void c5_resolvent(Outcome& o) {
  const auto seg = line_segment();
  const Point z0(0.0, 2.0);
  const Complex kappa = kappa_estimate(seg, z0, Window{{0.0, 0.0}, 1.0}).value;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> x(-1.0, 1.0), y(0.25, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Point z(x(rng), (t % 2 ? 1.0 : -1.0) * y(rng));
    worst = std::max(worst, resolvent_residual(seg, z, kappa, z0) / std::norm(2.0 * kappa));
  }
  o.detail << "max |v^2 - 2 kappa v| / |2 kappa|^2 = " << worst << " over 20 probes";
  o.expect(worst < 0.1, "residual < 0.1 |2 kappa|^2");
}

double blowup_defect(const PointCloudMeasure& mu, Point at, double lambda) {
  const auto nu = blowup(mu, at, lambda);
  return reflectionless_defect(nu, make_phi_family(nu, 4.0, 16));
}

void c6_defect(Outcome& o) {
  const auto seg = line_segment();
  const auto circ = unit_circle();
  const double ds = blowup_defect(seg, seg.point(seg.size() / 2), 0.1);
  const double dc = blowup_defect(circ, circ.point(0), 0.1);
  o.detail << "defect segment " << ds << ", circle " << dc << " (blow-up 0.1 at a support point, 16 functions, A=4)";
  o.expect(ds < dc / 5, "segment < circle / 5");
}

void c7_norm(Outcome& o) {
  const auto seg = line_segment();
  const NormResult r = operator_norm(seg, default_delta(seg));
  o.detail << "segment norm " << r.value << " (" << r.iterations << " iterations, ratio to pi " << r.value / pi << "); cantor";
  o.expect(std::abs(r.value - pi) <= 0.05 * pi, "segment within 5% of pi");
  double prev = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto c = gen_cantor(n);
    const double v = operator_norm(c, default_delta(c)).value;
    o.detail << " " << v;
    o.expect(v > prev, "cantor norms strictly increase");
    prev = v;
  }
}

void c8_riesz(Outcome& o) {
  const auto seg = gen_segment(1.0, {-18.0, 21.3}, {82.0, 21.3}, 0.01);
  const Square p = Square::dyadic(6, 0, 0);
  double norms[2];
  for (int d : {5, 6}) {
    std::vector<TestFn> fns;
    for (const auto& e : lattice_family(seg, p, d, 2.0)) fns.push_back(e.psi);
    norms[d - 5] = gram_norm(gram(seg, fns));
  }
  const double sat = std::abs(norms[1] - norms[0]) / norms[0];
  o.detail << "gram norm depth 5 " << norms[0] << ", depth 6 " << norms[1] << " (change " << sat << ")";
  o.expect(sat <= 0.1, "saturation within 10%");

  // decay: Q'' fixed, Q' concentric and shrinking where psi_Q'' is affine; a
  // short segment covering both tents of psi_Q'' keeps 30 or more samples per
  // tent radius at the smallest Q' within 2e4 points
  const auto fine = gen_segment(1.0, {-1.05, 0.37}, {0.25, 0.37}, 6.5e-5);
  const auto big = make_psi_family(fine, Square::dyadic(0, 0, 0), 2.0, 1).front();
  const auto& at = big.atoms();
  const double x_star = 0.5 * (at[0].center.real() + at[0].radius + at[1].center.real() + at[1].radius);
  const SparseFn sb = big.sample(fine);
  std::vector<double> xs, ys;
  for (int k = 5; k <= 9; ++k) {
    const double ell = std::ldexp(1.0, -k);
    const auto small = make_psi_family(fine, Square({x_star, 0.37}, ell), 2.0, 1).front();
    xs.push_back(std::log(ell));
    ys.push_back(std::log(std::abs(inner(fine, small.sample(fine), sb))));
  }
  double mx = 0, my = 0, sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / xs.size(), my += ys[i] / ys.size();
  for (std::size_t i = 0; i < xs.size(); ++i) sxy += (xs[i] - mx) * (ys[i] - my), sxx += (xs[i] - mx) * (xs[i] - mx);
  o.detail << "; decay exponent " << sxy / sxx;
  o.expect(sxy / sxx >= 1.4, "decay exponent >= 1.4");

  // Theta under blow-up
  double worst = 0.0;
  const ThetaParams prm{2.0, 4.0, 4, 2};
  for (const Square& q : {Square::dyadic(2, 2, 5), Square::dyadic(3, 3, 2)}) {
    const double base = theta(seg, q, prm).theta_upper;
    for (double lambda : {0.25, 3.0}) {
      const Point z(10.3, 20.0);
      const double t = theta(blowup(seg, z, lambda), q.rescaled(z, lambda), prm).theta_upper;
      worst = std::max(worst, std::abs(t - base) / base);
    }
  }
  o.detail << "; theta blow-up relative error " << worst;
  o.expect(worst <= 1e-10, "theta invariant to 1e-10");
}

// Curve checks on one build; returns the total length.
double curve_checks(Outcome& o, const PointCloudMeasure& mu, const Square& p, double tau, double l0) {
  const auto b = build_graph(mu, p, tau, l0);
  const NetGraph& g = b.graph;
  const PolylineCurve f = euler_walk(g, p);
  const Square p3 = p.dilate(3.0);
  std::set<std::size_t> visited(f.vertex_walk.begin(), f.vertex_walk.end());
  bool covers = true;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (p3.contains(g.vertex(v)) && !visited.count(v)) covers = false;
  o.expect(covers, "walk covers every net vertex of 3P");
  std::map<std::pair<std::size_t, std::size_t>, int> uses;
  for (std::size_t k = 1; k < f.vertex_walk.size(); ++k) {
    const auto a = f.vertex_walk[k - 1], c = f.vertex_walk[k];
    ++uses[{std::min(a, c), std::max(a, c)}];
  }
  int max_use = 0;
  for (const auto& [e, n] : uses) max_use = std::max(max_use, n);
  o.expect(max_use <= 2, "each edge traversed at most twice");
  bool capped = true;
  for (const Edge& e : g.edges())
    if (e.kind == EdgeKind::Inductive && e.length > 6 * std::sqrt(2.0) * e.scale) capped = false;
  o.expect(capped, "inductive edges <= 6 sqrt2 scale");
  std::size_t checks = 0;
  bool separated = true;
  // the four parents of P's neighbours cover 3P
  const auto half = [](std::int64_t k) { return static_cast<std::int64_t>(std::floor(k / 2.0)); };
  const auto& ix = *p.index();
  for (double l = l0; l < p.side(); l *= 2)
    for (auto kx : {half(ix.kx - 1), half(ix.kx + 1)})
      for (auto ky : {half(ix.ky - 1), half(ix.ky + 1)})
        for (const Square& q : dyadic_descendants(Square::dyadic(ix.j + 1, kx, ky), dyadic_exponent(2 * l))) {
          ++checks;
          if (!separation_check(g, q, l)) separated = false;
        }
  o.expect(separated, "separation_check at all scales");
  o.expect(f.lip_constant == f.total, "lip constant equals walk length");
  o.detail << "l0=" << l0 << ": net " << g.vertex_count() << ", L=" << b.ledger.total() << ", walk " << f.total
           << ", max traversals " << max_use << ", " << checks << " separation checks; ";
  return b.ledger.total();
}

void c9_curve(Outcome& o) {
  const auto seg = gen_segment(1.0, {-0.5, 0.37}, {1.5, 0.37}, std::ldexp(1.0, -13));
  const Square p = Square::dyadic(0, 0, 0);
  const double tau = 1.0 / 32;
  const double coarse = curve_checks(o, seg, p, tau, std::ldexp(1.0, -6));
  const double fine = curve_checks(o, seg, p, tau, std::ldexp(1.0, -7));
  o.detail << "L change on halving l0: " << std::abs(fine - coarse) / coarse;
  o.expect(std::abs(fine - coarse) <= 0.2 * coarse, "L(l0) stable within 20%");
}

void c10_carleson(Outcome& o) {
  const Square p = Square::dyadic(0, 0, 0);
  const double tau = 1.0 / 32;
  const auto seg = gen_segment(1.0, {-0.1, 0.37}, {1.1, 0.37}, std::ldexp(1.0, -14));
  const double s5 = carleson_norm(bad_family(seg, p, tau, 5), p);
  const double s6 = carleson_norm(bad_family(seg, p, tau, 6), p);
  o.detail << "segment depth 5, 6: " << s5 << " " << s6 << "; cantor n=7 depth 2..5:";
  o.expect(std::abs(s6 - s5) <= 0.1 * std::max(s5, s6), "segment norm stable within 10%");
  const auto cantor = gen_cantor(7);
  double prev = -1.0;
  for (int d = 2; d <= 5; ++d) {
    const double v = carleson_norm(bad_family(cantor, p, tau, d), p);
    o.detail << " " << v;
    if (prev >= 0.0) o.expect(v - prev >= 0.5, "cantor norm grows by >= 0.5 per depth");
    prev = v;
  }
}

void c11_inductive(Outcome& o) {
  const double tau = 1.0 / 32;
  const Square p = Square::dyadic(0, 0, 0);
  const auto cantor = gen_cantor(7);
  const auto bc = build_graph(cantor, p, tau, 1.0 / 256);
  const auto rc = inductive_implies_bad(cantor, bc.ledger, tau);
  const double h = std::ldexp(1.0, -13);
  const auto gap = concat(gen_segment(1.0, {-0.5, 0.37}, {0.45, 0.37}, h), gen_segment(1.0, {0.55, 0.37}, {1.5, 0.37}, h));
  const auto bg = build_graph(gap, p, tau, std::ldexp(1.0, -7));
  const auto rg = inductive_implies_bad(gap, bg.ledger, tau);
  o.detail << "cantor: " << rc.flagged << "/" << rc.checked << " bad (" << rc.excluded.size()
           << " below floor); gap: " << rg.flagged << "/" << rg.checked << " bad (" << rg.excluded.size() << " below floor)";
  o.expect(rc.checked > 0 && rg.checked > 0, "non-vacuous");
  o.expect(rc.fraction() == 1.0 && rg.fraction() == 1.0, "all ledger squares above the floor are bad");
}

void c12_blowup(Outcome& o) {
  const auto seg = line_segment();
  const auto circ = unit_circle();
  double reg_err = 0.0;
  for (const auto* mu : {&seg, &circ})
    for (double lambda : {0.1, 3.0}) {
      const auto a = regularity(*mu), b = regularity(blowup(*mu, mu->point(17), lambda));
      reg_err = std::max({reg_err, std::abs(a.niceness - b.niceness) / a.niceness,
                          std::abs(a.ad_constant - b.ad_constant) / a.ad_constant});
    }
  // defect with the dictionary carried along
  double def_err = 0.0;
  const auto nu = blowup(circ, circ.point(0), 0.1);
  const auto dict = make_phi_family(nu, 4.0, 16);
  const double d0 = reflectionless_defect(nu, dict);
  for (double lambda : {0.5, 4.0}) {
    const Point z(0.7, -0.2);
    std::vector<TestFn> moved;
    for (const auto& f : dict) moved.push_back(f.rescaled(z, lambda, 1.0));
    def_err = std::max(def_err, std::abs(reflectionless_defect(blowup(nu, z, lambda), moved) - d0) / d0);
  }
  // theta on the circle
  double th_err = 0.0;
  const ThetaParams prm{2.0, 4.0, 4, 2};
  const Square q = Square::dyadic(-3, 7, 0);
  const double t0 = theta(circ, q, prm).theta_upper;
  for (double lambda : {0.125, 5.0}) {
    const Point z(0.3, 0.1);
    th_err = std::max(th_err, std::abs(theta(blowup(circ, z, lambda), q.rescaled(z, lambda), prm).theta_upper - t0) / t0);
  }
  o.detail << "relative errors: regularity " << reg_err << ", defect " << def_err << ", theta " << th_err;
  o.expect(reg_err <= 1e-9, "regularity invariant to 1e-9");
  o.expect(def_err <= 1e-9, "defect invariant to 1e-9");
  o.expect(th_err <= 1e-10, "theta invariant to 1e-10");
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<void(Outcome&)>> criteria{
      {1, c1_resolve},  {2, c2_tail},   {3, c3_pointwise}, {4, c4_line_values},  {5, c5_resolvent},  {6, c6_defect},
      {7, c7_norm},     {8, c8_riesz},  {9, c9_curve},     {10, c10_carleson},   {11, c11_inductive}, {12, c12_blowup}};
  std::set<int> pick;
  for (int i = 1; i < argc; ++i) pick.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& [n, fn] : criteria) {
    if (!pick.empty() && !pick.count(n)) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", n, o.detail.str().c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
