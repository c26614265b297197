#pragma once

#include <stdexcept>
#include <vector>

#include "fracmass/geometry.hpp"
#include "fracmass/riesz.hpp"

namespace fracmass {

// Vertex displacement field on an open arc-length-resampled curve;
// vanishes at both endpoints.
struct Perturbation {
  PolyCurve curve;
  std::vector<Vec> values;  // one per vertex

  void validate() const;
};

struct SelfIntersectionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Discrete s-fractional curvature at a vertex. Far edges are integrated
// on the polygon; the neighborhood spanned by the two incident edges is
// integrated on the quadratic reconstruction through the three nearest
// vertices (straight edges carry an identically zero integrand there).
Vec fractional_curvature(const PolyCurve& c, int u_index, double s,
                         const QuadConfig& quad = {});

// First variation of the fractional mass along h; equals the pairing
// of the mass gradient with h.
double first_variation(const PolyCurve& c, const Perturbation& h, double s,
                       const QuadConfig& quad = {});

// Explicit Euler step of the curvature flow followed by uniform
// arc-length resampling. Throws SelfIntersectionError if the stepped
// curve self-intersects.
PolyCurve gradient_flow_step(const PolyCurve& c, double s, double dt,
                             const QuadConfig& quad = {});

}  // namespace fracmass
