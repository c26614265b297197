#pragma once

#include <string>
#include <vector>

#include "fracmass/vec.hpp"

namespace fracmass {

using Point = Vec;

struct OrientedSegment {
  Point a;        // start
  Point b;        // end
  double w = 1.0; // signed multiplicity

  double length() const { return dist(a, b); }
  Vec tangent() const { return normalized(b - a); }
  Point at(double t) const { return a + t * (b - a); }  // t in [0,1]
};

// Oriented piecewise-linear curve. For closed curves the closing edge
// (last vertex -> first vertex) is implicit; first != last in storage.
struct PolyCurve {
  std::vector<Point> vertices;
  bool closed = false;
  double weight = 1.0;

  int dim() const { return vertices.empty() ? 0 : vertices.front().dim(); }
  std::size_t edge_count() const {
    return closed ? vertices.size() : vertices.size() - 1;
  }
  OrientedSegment edge(std::size_t i) const;
  double length() const;
  void validate() const;  // throws std::invalid_argument on violation
};

// Weighted family of oriented segments: the discrete 1-current.
struct SegmentCurrent {
  std::vector<OrientedSegment> segments;
  int dim = 0;

  double total_mass() const;  // sum |w| * length
  void append(const SegmentCurrent& other);
};

// 0-current: weighted atoms, the boundary of a SegmentCurrent.
struct BoundaryChain {
  struct Atom {
    Point p;
    double charge;
  };
  std::vector<Atom> atoms;
  double merge_tol = 0.0;

  bool empty() const { return atoms.empty(); }
};

SegmentCurrent curve_to_current(const PolyCurve& c);
SegmentCurrent curves_to_current(const std::vector<PolyCurve>& cs);

// Each segment contributes +w at its end and -w at its start; atoms
// within tol are merged and zero charges dropped.
BoundaryChain boundary(const SegmentCurrent& mu, double tol);

// Default merge tolerance: 1e-9 times the bounding-box diameter.
double default_merge_tol(const SegmentCurrent& mu);

// Decompose a boundary-free current into closed curves of weight
// `quantum` by Eulerian cycle extraction. quantum <= 0 means detect it
// from the weights (GCD-like, relative tolerance 1e-6).
std::vector<PolyCurve> loop_decompose(const SegmentCurrent& mu, double tol,
                                      double quantum = 0.0);

SegmentCurrent transform(const SegmentCurrent& mu, double scale,
                         const Point& shift);

enum class CurveKind { Circle, Ellipse, Helix, Segment };

// Test fixtures sampled at equal parameter steps.
//   circle: params = {radius}            (closed, d=2)
//   ellipse: params = {a, b}             (closed, d=2)
//   helix:  params = {radius, pitch, turns} (open, d=3)
//   segment: params = {length}           (open, d=2, along e1)
PolyCurve sample_smooth_curve(CurveKind kind, const std::vector<double>& params,
                              int n);
CurveKind parse_curve_kind(const std::string& name);

// Uniform arc-length resampling preserving endpoints (open) or the
// start vertex (closed).
PolyCurve resample_arclength(const PolyCurve& c, int n);

// Minimum distance between two segments in R^d.
double segment_distance(const OrientedSegment& A, const OrientedSegment& B);

// True if any two non-adjacent edges come within tol of each other.
bool self_intersects(const PolyCurve& c, double tol);

}  // namespace fracmass
