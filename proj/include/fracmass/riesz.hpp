#pragma once

#include <cstdint>
#include <utility>

#include "fracmass/geometry.hpp"

namespace fracmass {

struct QuadConfig {
  int gauss_order = 8;       // tensor Gauss order for far pairs
  int near_split_depth = 20; // max recursive bisection depth for near pairs
  double near_ratio = 2.0;   // gap/size threshold classifying "near"
};

struct FracParams {
  double s = 0.5;    // exponent, in (0,1)
  double eps = 0.0;  // > 0 selects the clamped exponent-1 kernel
  QuadConfig quad;
  bool smooth_m1 = false;             // 1/sqrt(r^2+eps^2) instead of 1/max(r,eps)
  bool force_quadrature_self = false; // self terms by quadrature, not closed form

  void validate() const;
};

// r^{-s}, or the regularized exponent-1 kernel when eps > 0.
double kernel(double r, const FracParams& p);

// Closed form of the segment self energy: 2 L^{2-s} / ((1-s)(2-s)).
double self_energy_segment(double L, double s);

// Same value by desingularized quadrature (independent route).
double self_energy_segment_quad(double L, double s, const QuadConfig& q);

// One ordered cross term of the double sum: w_a w_b (tau_a . tau_b)
// times the double integral of the kernel over the two segments.
double pair_energy(const OrientedSegment& A, const OrientedSegment& B,
                   const FracParams& p);

// Full s-fractional mass: sum over all ordered segment pairs, fixed
// order, compensated accumulation.
double fractional_mass(const SegmentCurrent& mu, const FracParams& p);

// Regularized exponent-1 mass with kernel 1/max(r, eps).
double regularized_mass_m1(const SegmentCurrent& mu, double eps,
                           const QuadConfig& q, bool smooth = false);

// Monte-Carlo estimate of the fractional mass for large currents:
// analytic diagonal plus sampled cross part. Returns (estimate, stderr).
std::pair<double, double> fractional_mass_mc(const SegmentCurrent& mu, double s,
                                             long n_samples,
                                             std::uint64_t seed);

}  // namespace fracmass
