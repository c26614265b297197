#pragma once

#include <cstdint>
#include <utility>

#include "fracmass/geometry.hpp"
#include "fracmass/riesz.hpp"

namespace fracmass {

// Bounded planar set with polygonal boundary: outer curve
// counterclockwise, holes clockwise, all simple and disjoint.
struct PlanarRegion {
  PolyCurve outer;
  std::vector<PolyCurve> holes;

  void validate() const;  // orientation via signed areas, simplicity
  double area() const;    // shoelace, holes subtracted
  double boundary_length() const;
  bool contains(const Point& p) const;  // winding-number test
  SegmentCurrent boundary_current() const;
};

double signed_area(const PolyCurve& c);

// Monte-Carlo s-fractional perimeter: double integral of
// |x-y|^{-2-s} over E x complement(E). Returns (estimate, stderr).
//
// Decomposition: pair separations below r_near use the analytic
// first-order tube formula 2 * Per(E) * r^{1-s}/(1-s); the middle range
// is importance-sampled with radial density ~ r^{-1-s}; separations
// beyond the diameter contribute the exact tail |E| * 2 pi R^{-s} / s.
// r_cut > 0 drops all pairs closer than r_cut (truncation studies) and
// disables the analytic near term.
std::pair<double, double> fractional_perimeter_mc(const PlanarRegion& E,
                                                  double s, long n,
                                                  std::uint64_t seed,
                                                  double r_cut = 0.0);

// (1/s^2) * fractional mass of the oriented boundary current.
double boundary_mass_perimeter(const PlanarRegion& E, double s,
                               const FracParams& p);

}  // namespace fracmass
