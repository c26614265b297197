#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "fracmass/geometry.hpp"
#include "fracmass/riesz.hpp"
#include "fracmass/rng.hpp"
#include "fracmass/spectral.hpp"

using namespace fracmass;

namespace {

PolyCurve unit_square() {
  PolyCurve c;
  c.closed = true;
  c.vertices = {Vec{0, 0}, Vec{1, 0}, Vec{1, 1}, Vec{0, 1}};
  return c;
}

double cnorm2(const CVec& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return s;
}

}  // namespace

TEST_CASE("riesz_constant: closed-form checkpoints") {
  CHECK(riesz_constant(1.0, 2) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  CHECK(riesz_constant(1.5, 3) ==
        doctest::Approx(std::pow(2.0, 1.5) * std::pow(M_PI, 1.5)).epsilon(1e-12));
  // 2^{1.5} pi Gamma(0.75)/Gamma(0.25), frozen from a high-precision oracle.
  CHECK(riesz_constant(0.5, 2) ==
        doctest::Approx(3.0032921893612594).epsilon(1e-12));
}

TEST_CASE("riesz_constant: reflection identity c(a,d)c(d-a,d) = (2 pi)^d") {
  for (int d : {2, 3})
    for (double a : {0.3, 0.5, 1.0, 1.4}) {
      const double prod = riesz_constant(a, d) * riesz_constant(d - a, d);
      CHECK(prod == doctest::Approx(std::pow(2.0 * M_PI, d)).epsilon(1e-10));
    }
}

TEST_CASE("riesz_constant: domain errors") {
  CHECK_THROWS_AS(riesz_constant(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(riesz_constant(2.0, 2), std::domain_error);
  CHECK_THROWS_AS(riesz_constant(-0.5, 3), std::domain_error);
}

TEST_CASE("fourier_of_current: xi = 0 gives the total vector mass") {
  SegmentCurrent mu = curve_to_current(unit_square());
  CVec f = fourier_of_current(mu, Vec{0, 0});
  CHECK(cnorm2(f) < 1e-28);  // closed curve telescopes

  SegmentCurrent seg;
  seg.dim = 2;
  seg.segments.push_back({Vec{0, 0}, Vec{2, 0}, 1.5});
  f = fourier_of_current(seg, Vec{0, 0});
  CHECK(f[0].real() == doctest::Approx(3.0));
  CHECK(std::abs(f[0].imag()) < 1e-15);
  CHECK(std::abs(f[1]) < 1e-15);
}

TEST_CASE("fourier_of_current: unit segment at xi = pi e1") {
  SegmentCurrent mu;
  mu.dim = 2;
  mu.segments.push_back({Vec{0, 0}, Vec{1, 0}, 1.0});
  CVec f = fourier_of_current(mu, Vec{M_PI, 0.0});
  // (1 - e^{-i pi}) / (i pi) = 2/(i pi): magnitude 2/pi, purely imaginary.
  CHECK(std::abs(f[0]) == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
  CHECK(std::abs(f[0].real()) < 1e-14);
  CHECK(std::abs(f[1]) < 1e-15);
}

TEST_CASE("fourier_of_current: reversal negates, linearity holds") {
  SegmentCurrent a;
  a.dim = 2;
  a.segments.push_back({Vec{0.1, 0.4}, Vec{1.2, 0.9}, 1.0});
  SegmentCurrent rev = a;
  std::swap(rev.segments[0].a, rev.segments[0].b);
  const Vec xi{1.7, -0.6};
  CVec fa = fourier_of_current(a, xi);
  CVec fr = fourier_of_current(rev, xi);
  for (int i = 0; i < 2; ++i) CHECK(std::abs(fa[i] + fr[i]) < 1e-14);

  Rng rng(9);
  SegmentCurrent b;
  b.dim = 2;
  b.segments.push_back({Vec{rng.uniform(), rng.uniform()},
                        Vec{1 + rng.uniform(), rng.uniform()}, 0.7});
  SegmentCurrent sum = a;
  sum.append(b);
  CVec fs = fourier_of_current(sum, xi);
  CVec fb = fourier_of_current(b, xi);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(fs[i] - (fa[i] + fb[i])) < 1e-14);
}

TEST_CASE("fourier_of_current: low-frequency decay of closed currents") {
  SegmentCurrent mu = curve_to_current(unit_square());
  const Vec xi0{0.6, 0.8};
  double prev_ratio = 0.0;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const double a = std::sqrt(cnorm2(fourier_of_current(mu, t * xi0)));
    const double ratio = a / t;
    if (prev_ratio > 0.0)
      CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.02));
    prev_ratio = ratio;
  }
  CHECK(prev_ratio < 10.0);  // |F[mu](t xi)| = O(t), bounded slope
}

TEST_CASE("spectral_mass: matches the direct mass on closed fixtures") {
  FracParams p;
  p.s = 0.5;
  SpectralConfig cfg;
  SegmentCurrent sq = curve_to_current(unit_square());
  const double direct = fractional_mass(sq, p);
  const double spec = spectral_mass(sq, 0.5, cfg);
  CHECK(std::abs(spec - direct) / direct < 0.05);
}

TEST_CASE("spectral_mass: dilation scaling within tolerance") {
  SpectralConfig cfg;
  SegmentCurrent sq = curve_to_current(unit_square());
  const double base = spectral_mass(sq, 0.5, cfg);
  const double big = spectral_mass(transform(sq, 2.0, Vec{0, 0}), 0.5, cfg);
  CHECK(big / base == doctest::Approx(std::pow(2.0, 1.5)).epsilon(0.05));
}

TEST_CASE("spectral_mass: config validation") {
  SegmentCurrent sq = curve_to_current(unit_square());
  SpectralConfig bad;
  bad.xi_min = 1.0;
  bad.xi_max = 0.5;
  CHECK_THROWS_AS(spectral_mass(sq, 0.5, bad), std::invalid_argument);
  bad = SpectralConfig{};
  bad.radial_nodes = 4;
  CHECK_THROWS_AS(spectral_mass(sq, 0.5, bad), std::invalid_argument);
}

TEST_CASE("indicator_fourier: xi = 0 returns the area") {
  PolyCurve sq = unit_square();
  CHECK(indicator_fourier(sq, Vec{0, 0}).real() == doctest::Approx(1.0));
  PolyCurve tri;
  tri.closed = true;
  tri.vertices = {Vec{0, 0}, Vec{2, 0}, Vec{0, 1}};
  CHECK(indicator_fourier(tri, Vec{0, 0}).real() == doctest::Approx(1.0));
}

TEST_CASE("indicator_fourier: matches the separable square transform") {
  // F[chi_{[0,1]^2}](xi) factorizes into 1-D integrals.
  PolyCurve sq = unit_square();
  auto one_d = [](double w) {
    if (w == 0.0) return std::complex<double>(1.0, 0.0);
    const std::complex<double> iw(0.0, w);
    return (1.0 - std::exp(-iw)) / iw;
  };
  for (const Vec& xi : {Vec{1.3, 0.0}, Vec{0.0, 2.1}, Vec{0.9, -1.7}}) {
    const std::complex<double> got = indicator_fourier(sq, xi);
    const std::complex<double> want = one_d(xi[0]) * one_d(xi[1]);
    CHECK(std::abs(got - want) < 1e-12);
  }
}

TEST_CASE("indicator_spectral_mass: equals the boundary current spectral mass") {
  // |F[mu_{boundary E}]|^2 = |xi|^2 |F[chi_E]|^2, so the two spectral
  // routes must agree on the same annulus.
  PolyCurve sq = unit_square();
  SpectralConfig cfg;
  cfg.radial_nodes = 800;
  cfg.angular_nodes = 128;
  const double via_indicator = indicator_spectral_mass(sq, 0.5, cfg);
  const double via_boundary =
      spectral_mass(curve_to_current(sq), 0.5, cfg);
  CHECK(via_indicator == doctest::Approx(via_boundary).epsilon(1e-10));
}

TEST_CASE("indicator_spectral_mass: orientation reversal leaves it unchanged") {
  PolyCurve sq = unit_square();
  PolyCurve rev = sq;
  std::reverse(rev.vertices.begin(), rev.vertices.end());
  SpectralConfig cfg;
  cfg.radial_nodes = 400;
  cfg.angular_nodes = 64;
  CHECK(indicator_spectral_mass(sq, 0.5, cfg) ==
        doctest::Approx(indicator_spectral_mass(rev, 0.5, cfg)).epsilon(1e-12));
}
