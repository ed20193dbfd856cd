#include "ucauchy/cauchy.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

namespace ucauchy {

Complex kernel(Complex z) {
  require(z != Complex(0.0, 0.0), "kernel: K(z) = 1/z is undefined at z = 0");
  return 1.0 / z;
}

Complex kernel_delta(Complex z, double delta) {
  const double r2 = std::norm(z);
  const double m = std::max(delta * delta, r2);
  if (m == 0.0) return {0.0, 0.0};
  return {z.real() / m, -z.imag() / m};
}

FieldSample transform_delta(const PointCloudMeasure& mu, std::span<const double> f, double delta,
                            std::span<const Point> targets) {
  require(f.size() == mu.size(), "transform_delta: f must have one value per atom");
  require(delta >= 0.0, "transform_delta: delta must be non-negative");
  FieldSample out;
  out.targets.assign(targets.begin(), targets.end());
  out.values.reserve(targets.size());
  for (Point z : targets) {
    if (delta == 0.0)
      require(!mu.empty() && mu.index().nearest(z).distance > 0.0,
              "transform_delta: delta = 0 with a target on the cloud");
    Complex s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (f[i] != 0.0) s += kernel_delta(z - mu.point(i), delta) * (f[i] * mu.weight(i));
    out.values.push_back(s);
  }
  return out;
}

double pointwise_bound(double niceness, double delta, double f_l2) {
  return std::sqrt(3.0 * niceness / delta) * f_l2;
}

namespace {

// Union of the supports, ascending, with both functions' values aligned.
struct Merged {
  std::vector<std::size_t> index;
  std::vector<double> f, g;
};

Merged merge(const SparseFn& f, const SparseFn& g) {
  Merged m;
  std::size_t a = 0, b = 0;
  while (a < f.size() || b < g.size()) {
    const std::size_t ia = a < f.size() ? f.index[a] : SIZE_MAX;
    const std::size_t ib = b < g.size() ? g.index[b] : SIZE_MAX;
    const std::size_t i = std::min(ia, ib);
    m.index.push_back(i);
    m.f.push_back(ia == i ? f.value[a++] : 0.0);
    m.g.push_back(ib == i ? g.value[b++] : 0.0);
  }
  return m;
}

}  // namespace

Complex bilinear_I_delta(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g,
                         double delta) {
  require(delta >= 0.0, "bilinear_I_delta: delta must be non-negative");
  const Merged m = merge(f, g);
  Complex s = 0.0;
  for (std::size_t a = 0; a < m.index.size(); ++a) {
    const std::size_t i = m.index[a];
    for (std::size_t b = a + 1; b < m.index.size(); ++b) {
      const std::size_t j = m.index[b];
      const double h = m.f[b] * m.g[a] - m.f[a] * m.g[b];
      if (h == 0.0) continue;
      s += kernel_delta(mu.point(i) - mu.point(j), delta) * (h * mu.weight(i) * mu.weight(j));
    }
  }
  return s;
}

Complex bilinear_I_delta(const PointCloudMeasure& mu, std::span<const double> f,
                         std::span<const double> g, double delta) {
  require(f.size() == mu.size() && g.size() == mu.size(),
          "bilinear_I_delta: f and g must have one value per atom");
  return bilinear_I_delta(mu, sparse_from_dense(f), sparse_from_dense(g), delta);
}

Complex pairing(const PointCloudMeasure& mu, const SparseFn& f, const SparseFn& g, double delta) {
  require(delta >= 0.0, "pairing: delta must be non-negative");
  Complex s = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const std::size_t i = g.index[a];
    const Point p = mu.point(i);
    Complex inner_sum = 0.0;
    for (std::size_t b = 0; b < f.size(); ++b) {
      const std::size_t j = f.index[b];
      if (j == i) continue;
      inner_sum += kernel_delta(p - mu.point(j), delta) * (f.value[b] * mu.weight(j));
    }
    s += inner_sum * (g.value[a] * mu.weight(i));
  }
  return s;
}

// --- operator norm ------------------------------------------------------------

namespace {

// y = B x with B_ij = sqrt(w_i) K_delta(p_i - p_j) sqrt(w_j), i != j. B is
// antisymmetric, so each pair is visited once and feeds both rows.
class KernelMatrix {
 public:
  KernelMatrix(const PointCloudMeasure& mu, double delta)
      : n_(mu.size()), px_(n_), py_(n_), sw_(n_), d2_(delta * delta) {
    for (std::size_t i = 0; i < n_; ++i) {
      px_[i] = mu.point(i).real();
      py_[i] = mu.point(i).imag();
      sw_[i] = std::sqrt(mu.weight(i));
    }
  }

  void apply(const std::vector<Complex>& x, std::vector<Complex>& y) const {
    std::vector<double> ur(n_), ui(n_), yr(n_, 0.0), yi(n_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      ur[j] = sw_[j] * x[j].real();
      ui[j] = sw_[j] * x[j].imag();
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double xi = px_[i], yi0 = py_[i], uri = ur[i], uii = ui[i];
      double ar = 0.0, ai = 0.0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double dx = xi - px_[j];
        const double dy = yi0 - py_[j];
        const double m = std::max(d2_, dx * dx + dy * dy);
        const double kr = dx / m, ki = -dy / m;
        ar += kr * ur[j] - ki * ui[j];
        ai += kr * ui[j] + ki * ur[j];
        yr[j] -= kr * uri - ki * uii;
        yi[j] -= kr * uii + ki * uri;
      }
      yr[i] += ar;
      yi[i] += ai;
    }
    y.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = sw_[i] * Complex(yr[i], yi[i]);
  }

  // B^* B x = -conj(B) B x, and conj(B) y = conj(B conj(y)).
  void apply_normal(const std::vector<Complex>& x, std::vector<Complex>& out) const {
    std::vector<Complex> bx, tmp;
    apply(x, bx);
    for (Complex& v : bx) v = std::conj(v);
    apply(bx, tmp);
    out.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = -std::conj(tmp[i]);
  }

 private:
  std::size_t n_;
  std::vector<double> px_, py_, sw_;
  double d2_;
};

Complex dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(const std::vector<Complex>& a) { return std::sqrt(std::real(dot(a, a))); }

}  // namespace

NormResult operator_norm(const PointCloudMeasure& mu, double delta, const NormOptions& opt) {
  require(delta >= 0.0, "operator_norm: delta must be non-negative");
  NormResult res;
  const std::size_t n = mu.size();
  if (n < 2) return res;
  const KernelMatrix b(mu, delta);

  // Lanczos with full reorthogonalisation on the Hermitian B^* B.
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  std::vector<std::vector<Complex>> basis;
  std::vector<Complex> v(n);
  for (Complex& c : v) c = {gauss(rng), gauss(rng)};
  const double v0 = norm2(v);
  for (Complex& c : v) c /= v0;
  basis.push_back(v);

  std::vector<double> alpha, beta;
  double prev = -1.0;
  const int cap = static_cast<int>(std::min<std::size_t>(opt.max_iterations, n));
  for (int k = 0; k < cap; ++k) {
    std::vector<Complex> w;
    b.apply_normal(basis.back(), w);
    alpha.push_back(std::real(dot(basis.back(), w)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const Complex c = dot(q, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    const double bnorm = norm2(w);

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    const double top = std::sqrt(std::max(0.0, es.eigenvalues()(m - 1)));
    res.value = top;
    res.iterations = k + 1;

    const double scale = std::max(top * top, 1e-300);
    if (bnorm <= 1e-13 * scale) return res;  // invariant subspace: Ritz values are exact
    if (prev >= 0.0 && std::abs(top - prev) <= opt.tolerance * top) return res;
    prev = top;
    beta.push_back(bnorm);
    for (Complex& c : w) c /= bnorm;
    basis.push_back(std::move(w));
  }
  if (static_cast<std::size_t>(cap) == n) return res;  // full Krylov space, exact
  throw NumericalError("operator_norm: no convergence after " + std::to_string(cap) +
                       " iterations (last estimate " + std::to_string(res.value) + ")");
}

// --- C~(1) ------------------------------------------------------------------------

namespace {

void require_off_support(const PointCloudMeasure& mu, Point z, const char* what) {
  require(!mu.empty(), "empty measure");
  const double d = mu.index().nearest(z).distance;
  if (d < 2.0 * mu.mesh())
    throw ConfigError(std::string(what) + " lies within 2*mesh of the support (distance " +
                      std::to_string(d) + ")");
}

}  // namespace

Complex tilde_cauchy_one(const PointCloudMeasure& mu, Point z, Point z0) {
  require_off_support(mu, z, "tilde_cauchy_one: z");
  require_off_support(mu, z0, "tilde_cauchy_one: z0");
  Complex s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point p = mu.point(i);
    s += (1.0 / (z - p) - 1.0 / (z0 - p)) * mu.weight(i);
  }
  return s;
}

double l1_away_ratio(const PointCloudMeasure& mu, Point z, Point z0) {
  require(z != z0, "l1_away_ratio: z and z0 must differ");
  const double d0 = std::min(support_distance(mu, z), support_distance(mu, z0));
  require(d0 > 0.0, "l1_away_ratio: z and z0 must be off the support");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point p = mu.point(i);
    s += std::abs(1.0 / (z - p) - 1.0 / (z0 - p)) * mu.weight(i);
  }
  return s * d0 / std::abs(z - z0);
}

Complex tilde_pairing(const PointCloudMeasure& mu, const SparseFn& psi, Point z0, Point u_center,
                      double u_radius, double delta) {
  require(!psi.empty(), "tilde_pairing: psi vanishes on the support");
  require(mu.index().nearest(z0).distance > 0.0, "tilde_pairing: z0 must be off the support");
  const SparseFn chi = disc_indicator(mu, u_center, u_radius);
  std::vector<char> in_u(mu.size(), 0);
  for (std::size_t i : chi.index) in_u[i] = 1;

  // <C_delta(chi_U), psi>
  const Complex first = pairing(mu, chi, psi, delta);

  // C(chi_U)(z0) * int psi
  Complex c_at_z0 = 0.0;
  for (std::size_t i : chi.index) c_at_z0 += kernel(z0 - mu.point(i)) * mu.weight(i);
  const Complex second = c_at_z0 * integral(mu, psi);

  // int psi(z) sum_{xi outside U} [K(z - xi) - K(z0 - xi)] w
  Complex third = 0.0;
  for (std::size_t a = 0; a < psi.size(); ++a) {
    const Point z = mu.point(psi.index[a]);
    Complex s = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
      if (in_u[j]) continue;
      const Point p = mu.point(j);
      s += (kernel(z - p) - kernel(z0 - p)) * mu.weight(j);
    }
    third += s * (psi.value[a] * mu.weight(psi.index[a]));
  }
  return first - second + third;
}

// --- kappa and the defect ------------------------------------------------------------

KappaEstimate kappa_estimate(const PointCloudMeasure& mu, Point z0, const Window& window,
                             double delta) {
  require(window.radius > 0.0, "kappa_estimate: window radius must be positive");
  require(mu.index().nearest(z0).distance > 0.0, "kappa_estimate: z0 must be off the support");
  if (delta <= 0.0) delta = default_delta(mu);
  const double r = window.radius;
  const auto inner_pts = mu.index().within(window.center, 0.5 * r);
  if (inner_pts.empty())
    throw NoSupportError("kappa_estimate: no support in the inner half of the window");

  // Three tents at support points spread through the inner half-window, each
  // supported inside the window.
  const double radii[3] = {0.5 * r, 0.375 * r, 0.25 * r};
  const std::size_t picks[3] = {inner_pts[inner_pts.size() / 4], inner_pts[inner_pts.size() / 2],
                                inner_pts[(3 * inner_pts.size()) / 4]};
  KappaEstimate est;
  est.base_point = z0;
  for (double factor : {10.0, 20.0})
    for (int t = 0; t < 3; ++t) {
      const TestFn psi({Tent{mu.point(picks[t]), radii[t], 1.0}}, 1.0 / radii[t],
                       mu.point(picks[t]), radii[t]);
      const SparseFn s = psi.sample(mu);
      const double mass = integral(mu, s);
      if (s.empty() || mass <= 0.0) throw NoSupportError("kappa_estimate: bump misses the support");
      est.samples.push_back(tilde_pairing(mu, s, z0, window.center, factor * r, delta) / mass);
    }
  Complex mean = 0.0;
  for (Complex v : est.samples) mean += v;
  est.value = mean / static_cast<double>(est.samples.size());
  for (Complex v : est.samples) est.spread = std::max(est.spread, std::abs(v - est.value));
  est.unstable = est.spread > 0.2 * std::abs(est.value);
  return est;
}

Point far_base_point(const PointCloudMeasure& mu) {
  require(!mu.empty(), "far_base_point: empty measure");
  double xmax = mu.point(0).real(), ymax = mu.point(0).imag();
  for (Point p : mu.points()) {
    xmax = std::max(xmax, p.real());
    ymax = std::max(ymax, p.imag());
  }
  const double off = std::max(mu.diameter(), mu.mesh());
  return {xmax + off, ymax + off};
}

double reflectionless_defect(const PointCloudMeasure& mu, std::span<const TestFn> dictionary,
                             double delta) {
  require(!dictionary.empty(), "reflectionless_defect: empty dictionary");
  if (delta <= 0.0) delta = default_delta(mu);
  const Point z0 = far_base_point(mu);
  double worst = 0.0;
  for (const TestFn& fn : dictionary) {
    const SparseFn psi = fn.sample(mu);
    if (psi.empty()) continue;
    const double u_radius = 2.0 * fn.support_radius() + 2.0 * delta;
    const Complex v = tilde_pairing(mu, psi, z0, fn.support_center(), u_radius, delta);
    const double denom = l2_norm(mu, psi) * std::sqrt(support_mass(mu, psi));
    worst = std::max(worst, std::abs(v) / denom);
  }
  return worst;
}

double resolvent_residual(const PointCloudMeasure& mu, Point z, Complex kappa, Point z0) {
  const Complex v = tilde_cauchy_one(mu, z, z0);
  return std::abs(v * v - 2.0 * kappa * v);
}

double resolve_identity_residual(Complex z, Complex xi, Complex omega) {
  const Complex zero(0.0, 0.0);
  require(z != xi && z != omega && xi != omega, "resolve identity: points must be distinct");
  require(z != zero && xi != zero && omega != zero, "resolve identity: points must be nonzero");
  const Complex zx = 1.0 / (z - xi) + 1.0 / xi;
  const Complex zw = 1.0 / (z - omega) + 1.0 / omega;
  const Complex a = zx * (1.0 / (xi - omega) + 1.0 / omega);
  const Complex b = zw * (1.0 / (omega - xi) + 1.0 / xi);
  const Complex rhs = zx * zw;
  return std::abs(a + b - rhs) / (1.0 + std::abs(a) + std::abs(b) + std::abs(rhs));
}

}  // namespace ucauchy
