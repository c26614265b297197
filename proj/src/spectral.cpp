#include "fracmass/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fracmass/perimeter.hpp"
#include "fracmass/quadrature.hpp"

namespace fracmass {

void SpectralConfig::validate() const {
  if (radial_nodes < 8 || angular_nodes < 8)
    throw std::invalid_argument("SpectralConfig: nodes >= 8 required");
  if (!(xi_min > 0.0 && xi_max > xi_min))
    throw std::invalid_argument("SpectralConfig: need 0 < xi_min < xi_max");
}

double riesz_constant(double alpha, int d) {
  if (d < 1) throw std::invalid_argument("riesz_constant: d >= 1 required");
  if (!(alpha > 0.0 && alpha < static_cast<double>(d)))
    throw std::domain_error("riesz_constant: alpha must lie in (0, d)");
  const double lg = (d - alpha) * std::log(2.0) +
                    0.5 * d * std::log(M_PI) +
                    std::lgamma(0.5 * (d - alpha)) - std::lgamma(0.5 * alpha);
  return std::exp(lg);
}

namespace {

// Line integral int_0^L e^{-i(a + t tau).xi} dt, closed form.
std::complex<double> segment_phase_integral(const Vec& a, const Vec& tau,
                                            double L, const Point& xi) {
  const std::complex<double> I(0.0, 1.0);
  const double kappa = dot(tau, xi);
  const std::complex<double> head = std::exp(-I * dot(a, xi));
  if (std::abs(kappa) * L < 1e-8)
    return head * (L * (1.0 - I * (0.5 * kappa * L)));
  return head * ((1.0 - std::exp(-I * (kappa * L))) / (I * kappa));
}

constexpr double kGolden = 0.6180339887498949;

// Integral of f over the annulus xi_min <= |xi| <= xi_max (d = 2 or 3):
// log-spaced radial Gauss panels, equal-weight angular grids rotated by
// the golden angle per radial node to break aliasing.
double annulus_integrate(int d, const SpectralConfig& cfg,
                         const std::function<double(const Point&)>& f) {
  cfg.validate();
  if (d != 2 && d != 3)
    throw std::invalid_argument("annulus_integrate: d must be 2 or 3");
  const int gl = 8;
  const int panels = std::max(1, cfg.radial_nodes / gl);
  const GaussRule& rr = gauss_legendre(gl);
  const double u0 = std::log(cfg.xi_min), u1 = std::log(cfg.xi_max);
  const double hu = (u1 - u0) / panels;

  const int na = cfg.angular_nodes;
  const double wa2 = 2.0 * M_PI / na;
  const GaussRule* polar = nullptr;
  int np = 0;
  if (d == 3) {
    np = std::max(4, cfg.angular_nodes / 8);
    polar = &gauss_legendre(std::min(np, 64));
    np = static_cast<int>(polar->nodes.size());
  }

  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  long knode = 0;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t k = 0; k < rr.nodes.size(); ++k, ++knode) {
      const double u = u0 + hu * (p + 0.5 * (1.0 + rr.nodes[k]));
      const double r = std::exp(u);
      const double wr = 0.5 * hu * rr.weights[k] * std::pow(r, d);  // r^{d-1} dr
      const double off = std::fmod(knode * kGolden, 1.0);
      if (d == 2) {
        double ang = 0.0;
        for (int j = 0; j < na; ++j) {
          const double th = wa2 * (j + off);
          ang += f(Point{r * std::cos(th), r * std::sin(th)});
        }
        add(wr * wa2 * ang);
      } else {
        double shell = 0.0;
        for (int m = 0; m < np; ++m) {
          const double ct = polar->nodes[m];
          const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
          const double offm = std::fmod(off + m * kGolden, 1.0);
          double ring = 0.0;
          for (int j = 0; j < na; ++j) {
            const double ph = wa2 * (j + offm);
            ring += f(Point{r * st * std::cos(ph), r * st * std::sin(ph),
                            r * ct});
          }
          shell += polar->weights[m] * wa2 * ring;
        }
        add(wr * shell);
      }
    }
  }
  return sum;
}

}  // namespace

CVec fourier_of_current(const SegmentCurrent& mu, const Point& xi) {
  CVec out(static_cast<std::size_t>(mu.dim), std::complex<double>(0.0, 0.0));
  for (const auto& seg : mu.segments) {
    const double L = seg.length();
    const Vec tau = seg.tangent();
    const std::complex<double> e =
        seg.w * segment_phase_integral(seg.a, tau, L, xi);
    for (int i = 0; i < mu.dim; ++i) out[i] += tau[i] * e;
  }
  return out;
}

double spectral_mass(const SegmentCurrent& mu, double s,
                     const SpectralConfig& cfg) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("spectral_mass: s must lie in (0,1)");
  if (mu.segments.empty()) return 0.0;
  const int d = mu.dim;
  const double pref =
      std::pow(2.0 * M_PI, -d) * riesz_constant(s, d);
  const double val = annulus_integrate(d, cfg, [&](const Point& xi) {
    const CVec F = fourier_of_current(mu, xi);
    double a2 = 0.0;
    for (const auto& z : F) a2 += std::norm(z);
    return a2 * std::pow(norm(xi), s - d);
  });
  return pref * val;
}

std::complex<double> indicator_fourier(const PolyCurve& polygon,
                                       const Point& xi) {
  if (polygon.dim() != 2 || !polygon.closed)
    throw std::invalid_argument("indicator_fourier: closed 2-D polygon required");
  const double q2 = norm2(xi);
  if (q2 == 0.0) return {signed_area(polygon), 0.0};
  const std::complex<double> I(0.0, 1.0);
  std::complex<double> out(0.0, 0.0);
  for (std::size_t e = 0; e < polygon.edge_count(); ++e) {
    const OrientedSegment seg = polygon.edge(e);
    const double L = seg.length();
    const Vec tau = seg.tangent();
    const Vec n{tau[1], -tau[0]};  // outward for counterclockwise
    out += (I * dot(xi, n) / q2) * segment_phase_integral(seg.a, tau, L, xi);
  }
  return out;
}

double indicator_spectral_mass(const PolyCurve& polygon, double s,
                               const SpectralConfig& cfg) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("indicator_spectral_mass: s must lie in (0,1)");
  polygon.validate();
  if (polygon.dim() != 2 || !polygon.closed)
    throw std::invalid_argument("indicator_spectral_mass: closed 2-D polygon");
  if (self_intersects(polygon, 0.0))
    throw std::invalid_argument("indicator_spectral_mass: non-simple polygon");
  const double pref = std::pow(2.0 * M_PI, -2) * riesz_constant(s, 2);
  const double val = annulus_integrate(2, cfg, [&](const Point& xi) {
    return std::pow(norm(xi), s) * std::norm(indicator_fourier(polygon, xi));
  });
  return pref * val;
}

std::pair<double, double> perimeter_identity_check(const PolyCurve& polygon,
                                                   double s,
                                                   const SpectralConfig& cfg,
                                                   long mc_samples,
                                                   std::uint64_t seed) {
  const double spectral = indicator_spectral_mass(polygon, s, cfg);
  PlanarRegion E;
  E.outer = polygon;
  if (signed_area(polygon) < 0.0)
    std::reverse(E.outer.vertices.begin(), E.outer.vertices.end());
  const double ps = fractional_perimeter_mc(E, s, mc_samples, seed).first;
  return {spectral, s * s * ps};
}

}  // namespace fracmass
