#include "fracmass/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracmass/quadrature.hpp"
#include "fracmass/rng.hpp"

namespace fracmass {

void FracParams::validate() const {
  if (eps > 0.0) return;  // exponent-1 path
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("FracParams: s must lie in (0,1)");
  if (quad.gauss_order < 2 || quad.near_split_depth < 0 || quad.near_ratio <= 0)
    throw std::invalid_argument("FracParams: invalid quadrature config");
}

double kernel(double r, const FracParams& p) {
  if (p.eps > 0.0) {
    if (r < 0.0) throw std::domain_error("kernel: negative distance");
    return p.smooth_m1 ? 1.0 / std::sqrt(r * r + p.eps * p.eps)
                       : 1.0 / std::max(r, p.eps);
  }
  if (r <= 0.0) throw std::domain_error("kernel: r must be > 0 when eps = 0");
  return std::pow(r, -p.s);
}

double self_energy_segment(double L, double s) {
  if (L <= 0.0) throw std::domain_error("self_energy_segment: L must be > 0");
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("self_energy_segment: s must lie in (0,1)");
  return 2.0 * std::pow(L, 2.0 - s) / ((1.0 - s) * (2.0 - s));
}

double self_energy_segment_quad(double L, double s, const QuadConfig& q) {
  // Double integral reduced to 2 int_0^L (L-w) w^{-s} dw; the power
  // substitution w = L xi^{1/(1-s)} removes the singularity exactly.
  const double p = 1.0 / (1.0 - s);
  double inner = graded_integrate(
      [p](double xi) { return 1.0 - std::pow(xi, p); }, 1.0,
      std::max(q.near_split_depth, 40), std::max(q.gauss_order, 12));
  return 2.0 * std::pow(L, 2.0 - s) / (1.0 - s) * inner;
}

namespace {

struct Kern {
  double s = 0.5;
  double eps = 0.0;
  bool smooth = false;

  bool clamped() const { return eps > 0.0; }
  double operator()(double r) const {
    if (eps > 0.0)
      return smooth ? 1.0 / std::sqrt(r * r + eps * eps)
                    : 1.0 / std::max(r, eps);
    return std::pow(r, -s);
  }
};

Kern make_kern(const FracParams& p) { return Kern{p.s, p.eps, p.smooth_m1}; }

// Plain tensor Gauss over a pair of (sub)segments given by endpoints.
double tensor_gauss(const Vec& a0, const Vec& a1, const Vec& b0, const Vec& b1,
                    const Kern& k, int order) {
  const GaussRule& r = gauss_legendre(order);
  const double La = dist(a0, a1), Lb = dist(b0, b1);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double u = 0.5 * (1.0 + r.nodes[i]);
    const Vec x = a0 + u * (a1 - a0);
    double row = 0.0;
    for (std::size_t j = 0; j < r.nodes.size(); ++j) {
      const double v = 0.5 * (1.0 + r.nodes[j]);
      row += r.weights[j] * k(dist(x, b0 + v * (b1 - b0)));
    }
    sum += r.weights[i] * row;
  }
  return sum * 0.25 * La * Lb;
}

double adaptive_pair(const Vec& a0, const Vec& a1, const Vec& b0, const Vec& b1,
                     const Kern& k, const QuadConfig& q, int depth) {
  const double La = dist(a0, a1), Lb = dist(b0, b1);
  const double size = std::max(La, Lb);
  const Vec ca = 0.5 * (a0 + a1), cb = 0.5 * (b0 + b1);
  const double gap = dist(ca, cb) - 0.5 * La - 0.5 * Lb;
  bool resolved = gap >= q.near_ratio * size;
  if (k.clamped() && size < 0.25 * k.eps) resolved = true;  // kernel flat here
  if (resolved || depth <= 0)
    return tensor_gauss(a0, a1, b0, b1, k, q.gauss_order);
  const Vec am = ca, bm = cb;
  return adaptive_pair(a0, am, b0, bm, k, q, depth - 1) +
         adaptive_pair(a0, am, bm, b1, k, q, depth - 1) +
         adaptive_pair(am, a1, b0, bm, k, q, depth - 1) +
         adaptive_pair(am, a1, bm, b1, k, q, depth - 1);
}

// F with F'' = |t|^{-s}; used for the collinear closed form.
double riesz_antideriv2(double t, double s) {
  return std::pow(std::abs(t), 2.0 - s) / ((1.0 - s) * (2.0 - s));
}

// Double integral of |.|^{-s} between collinear segments. sigma is the
// sign of tau_a . tau_b, c the offset of B's start along A's direction.
double collinear_integral(double La, double Lb, double c, double sigma,
                          double s) {
  auto F = [s](double t) { return riesz_antideriv2(t, s); };
  if (sigma > 0.0)
    return F(La - c) - F(-c) - F(La - Lb - c) + F(-Lb - c);
  return F(La + Lb - c) - F(La - c) - F(Lb - c) + F(-c);
}

double m1_self_quad(double L, double eps, bool smooth, const QuadConfig& q) {
  Kern k{1.0, eps, smooth};
  auto f = [&](double w) { return (L - w) * k(w); };
  // Kernel is bounded; split at the clamp radius to keep panels smooth.
  double cut = std::min(eps, L);
  double val = gauss_integrate(f, 0.0, cut, std::max(q.gauss_order, 12));
  if (L > cut) {
    double rest = graded_integrate([&](double t) { return f(cut + t); },
                                   L - cut, 30, std::max(q.gauss_order, 12));
    val += rest;
  }
  return 2.0 * val;
}

bool same_segment(const OrientedSegment& A, const OrientedSegment& B) {
  return A.a == B.a && A.b == B.b && A.w == B.w;
}

}  // namespace

double pair_energy(const OrientedSegment& A, const OrientedSegment& B,
                   const FracParams& p) {
  p.validate();
  const double La = A.length(), Lb = B.length();
  if (La <= 0.0 || Lb <= 0.0)
    throw std::invalid_argument("pair_energy: degenerate segment");
  if (same_segment(A, B)) {
    if (p.eps > 0.0)
      return A.w * A.w * m1_self_quad(La, p.eps, p.smooth_m1, p.quad);
    return A.w * A.w *
           (p.force_quadrature_self ? self_energy_segment_quad(La, p.s, p.quad)
                                    : self_energy_segment(La, p.s));
  }
  const Vec ta = (A.b - A.a) / La, tb = (B.b - B.a) / Lb;
  const double dt = dot(ta, tb);
  if (dt == 0.0) return 0.0;

  if (p.eps == 0.0 && std::abs(std::abs(dt) - 1.0) < 1e-12) {
    // Parallel; collinear pairs get the exact antiderivative combination
    // (adaptive subdivision would crawl along the contact line).
    const Vec r0 = B.a - A.a;
    const double along = dot(r0, ta);
    const double perp2 = norm2(r0) - along * along;
    const double scale = std::max(La, Lb);
    if (perp2 < 1e-24 * scale * scale) {
      double sigma = dt > 0.0 ? 1.0 : -1.0;
      return A.w * B.w * sigma *
             collinear_integral(La, Lb, along, sigma, p.s);
    }
  }
  const Kern k = make_kern(p);
  return A.w * B.w * dt *
         adaptive_pair(A.a, A.b, B.a, B.b, k, p.quad, p.quad.near_split_depth);
}

double fractional_mass(const SegmentCurrent& mu, const FracParams& p) {
  p.validate();
  if (mu.segments.empty())
    throw std::invalid_argument("fractional_mass: empty current");
  // Kahan accumulation in fixed pair order.
  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  const std::size_t n = mu.segments.size();
  for (std::size_t i = 0; i < n; ++i) {
    add(pair_energy(mu.segments[i], mu.segments[i], p));
    for (std::size_t j = i + 1; j < n; ++j)
      add(2.0 * pair_energy(mu.segments[i], mu.segments[j], p));
  }
  return sum;
}

double regularized_mass_m1(const SegmentCurrent& mu, double eps,
                           const QuadConfig& q, bool smooth) {
  if (eps <= 0.0) throw std::domain_error("regularized_mass_m1: eps must be > 0");
  FracParams p;
  p.s = 1.0;
  p.eps = eps;
  p.quad = q;
  p.smooth_m1 = smooth;
  return fractional_mass(mu, p);
}

std::pair<double, double> fractional_mass_mc(const SegmentCurrent& mu, double s,
                                             long n_samples,
                                             std::uint64_t seed) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("fractional_mass_mc: s must lie in (0,1)");
  if (n_samples < 1000)
    throw std::invalid_argument("fractional_mass_mc: too few samples");
  const std::size_t n = mu.segments.size();
  if (n == 0) return {0.0, 0.0};

  double diag = 0.0;
  std::vector<double> cum(n + 1, 0.0);
  double sum_l2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& seg = mu.segments[i];
    const double L = seg.length();
    diag += seg.w * seg.w * self_energy_segment(L, s);
    const double ell = std::abs(seg.w) * L;
    cum[i + 1] = cum[i] + ell;
    sum_l2 += ell * ell;
  }
  const double S = cum[n];
  if (n == 1 || S == 0.0) return {diag, 0.0};
  const double cross_measure = S * S - sum_l2;

  std::vector<Vec> tangents(n);
  std::vector<double> signs(n);
  for (std::size_t i = 0; i < n; ++i) {
    tangents[i] = mu.segments[i].tangent();
    signs[i] = mu.segments[i].w >= 0.0 ? 1.0 : -1.0;
  }
  auto pick = [&](Rng& rng) {
    double u = rng.uniform() * S;
    return static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin() - 1);
  };

  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  long count = 0;
  while (count < n_samples) {
    std::size_t i = std::min(pick(rng), n - 1);
    std::size_t j = std::min(pick(rng), n - 1);
    if (i == j) continue;
    const Vec x = mu.segments[i].at(rng.uniform());
    const Vec y = mu.segments[j].at(rng.uniform());
    const double r = dist(x, y);
    const double f =
        r > 0.0 ? signs[i] * signs[j] * dot(tangents[i], tangents[j]) *
                      std::pow(r, -s)
                : 0.0;
    ++count;
    const double d = f - mean;
    mean += d / count;
    m2 += d * (f - mean);
  }
  const double var = m2 / (count - 1);
  const double est = diag + cross_measure * mean;
  const double se = cross_measure * std::sqrt(var / count);
  return {est, se};
}

}  // namespace fracmass
