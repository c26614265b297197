#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "fracmass/geometry.hpp"

namespace fracmass {

// Truncated-annulus quadrature for the frequency-side integrals.
struct SpectralConfig {
  int radial_nodes = 2000;
  int angular_nodes = 256;
  double xi_min = 1e-2;
  double xi_max = 1e3;

  void validate() const;
};

using CVec = std::vector<std::complex<double>>;

// c(alpha, d) = 2^{d-alpha} pi^{d/2} Gamma((d-alpha)/2) / Gamma(alpha/2).
double riesz_constant(double alpha, int d);

// Closed-form Fourier transform (convention e^{-i x.xi}) of the vector
// measure of a segment current, evaluated at one frequency.
CVec fourier_of_current(const SegmentCurrent& mu, const Point& xi);

// (2 pi)^{-d} c(s,d) * integral over the annulus of |F[mu]|^2 |xi|^{s-d}.
double spectral_mass(const SegmentCurrent& mu, double s,
                     const SpectralConfig& cfg);

// Closed-form F[chi_E] for a simple closed polygon (divergence theorem:
// area integral -> boundary edge integrals). xi = 0 returns the area.
std::complex<double> indicator_fourier(const PolyCurve& polygon,
                                       const Point& xi);

// (2 pi)^{-2} c(s,2) * integral of |xi|^s |F[chi_E]|^2 over the annulus;
// equals the fractional mass of the boundary current.
double indicator_spectral_mass(const PolyCurve& polygon, double s,
                               const SpectralConfig& cfg);

// Returns (spectral M_s(boundary E), s^2 * MC fractional perimeter).
std::pair<double, double> perimeter_identity_check(const PolyCurve& polygon,
                                                   double s,
                                                   const SpectralConfig& cfg,
                                                   long mc_samples = 1000000,
                                                   std::uint64_t seed = 0);

}  // namespace fracmass
