#include "fracmass/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracmass/rng.hpp"

namespace fracmass {

double signed_area(const PolyCurve& c) {
  double a2 = 0.0;
  const std::size_t n = c.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = c.vertices[i];
    const Point& q = c.vertices[(i + 1) % n];
    a2 += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a2;
}

namespace {

bool point_in_polygon(const Point& p, const PolyCurve& c) {
  // Ray-crossing parity; adequate for MC (edge hits have measure zero).
  bool in = false;
  const std::size_t n = c.vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = c.vertices[i];
    const Point& b = c.vertices[j];
    if ((a[1] > p[1]) != (b[1] > p[1]) &&
        p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0])
      in = !in;
  }
  return in;
}

struct Bbox2 {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double diam() const { return std::hypot(x1 - x0, y1 - y0); }
};

Bbox2 curve_bbox(const PolyCurve& c) {
  Bbox2 b{c.vertices[0][0], c.vertices[0][1], c.vertices[0][0],
          c.vertices[0][1]};
  for (const auto& v : c.vertices) {
    b.x0 = std::min(b.x0, v[0]);
    b.y0 = std::min(b.y0, v[1]);
    b.x1 = std::max(b.x1, v[0]);
    b.y1 = std::max(b.y1, v[1]);
  }
  return b;
}

}  // namespace

void PlanarRegion::validate() const {
  outer.validate();
  if (outer.dim() != 2 || !outer.closed)
    throw std::invalid_argument("PlanarRegion: outer must be a closed 2-D curve");
  const double scale = curve_bbox(outer).diam();
  if (self_intersects(outer, 1e-12 * scale))
    throw std::invalid_argument("PlanarRegion: outer boundary self-intersects");
  if (signed_area(outer) <= 0.0)
    throw std::invalid_argument("PlanarRegion: outer must be counterclockwise");
  for (const auto& h : holes) {
    h.validate();
    if (h.dim() != 2 || !h.closed)
      throw std::invalid_argument("PlanarRegion: holes must be closed 2-D curves");
    if (self_intersects(h, 1e-12 * scale))
      throw std::invalid_argument("PlanarRegion: hole boundary self-intersects");
    if (signed_area(h) >= 0.0)
      throw std::invalid_argument("PlanarRegion: holes must be clockwise");
    for (const auto& v : h.vertices)
      if (!point_in_polygon(v, outer))
        throw std::invalid_argument("PlanarRegion: hole outside outer boundary");
  }
}

double PlanarRegion::area() const {
  double a = signed_area(outer);
  for (const auto& h : holes) a += signed_area(h);  // holes are negative
  return a;
}

double PlanarRegion::boundary_length() const {
  double l = outer.length();
  for (const auto& h : holes) l += h.length();
  return l;
}

bool PlanarRegion::contains(const Point& p) const {
  if (!point_in_polygon(p, outer)) return false;
  for (const auto& h : holes)
    if (point_in_polygon(p, h)) return false;
  return true;
}

SegmentCurrent PlanarRegion::boundary_current() const {
  SegmentCurrent mu = curve_to_current(outer);
  for (const auto& h : holes) mu.append(curve_to_current(h));
  return mu;
}

std::pair<double, double> fractional_perimeter_mc(const PlanarRegion& E,
                                                  double s, long n,
                                                  std::uint64_t seed,
                                                  double r_cut) {
  E.validate();
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("fractional_perimeter_mc: s must lie in (0,1)");
  if (n < 10000)
    throw std::invalid_argument("fractional_perimeter_mc: n >= 10^4 required");

  const Bbox2 bb = curve_bbox(E.outer);
  const double R = bb.diam();  // |y-x| > R forces y outside E
  if (r_cut >= R)
    throw std::invalid_argument("fractional_perimeter_mc: r_cut beyond diameter");
  const double per = E.boundary_length();
  const double vol = E.area();

  // Separations below r1: to first order the pair set is a tube of the
  // boundary, integral 2 Per r1^{1-s}/(1-s); corner corrections are
  // O(r1^{2-s}) and negligible at this r1.
  const double r1 = 1e-3 * R;
  double near = 0.0, rlo = r1;
  if (r_cut > 0.0) {
    rlo = r_cut;
  } else {
    near = 2.0 * per * std::pow(r1, 1.0 - s) / (1.0 - s);
  }

  const double tail = vol * 2.0 * M_PI * std::pow(R, -s) / s;

  // Middle range: radial density ~ r^{-1-s} on [rlo, R].
  const double c = s / (std::pow(rlo, -s) - std::pow(R, -s));
  Rng rng(seed);
  double mean = 0.0, m2 = 0.0;
  for (long k = 1; k <= n; ++k) {
    const double u = rng.uniform();
    const double r =
        std::pow(std::pow(rlo, -s) - u * (std::pow(rlo, -s) - std::pow(R, -s)),
                 -1.0 / s);
    const double th = rng.uniform(0.0, 2.0 * M_PI);
    const double bx0 = bb.x0 - r, bx1 = bb.x1 + r;
    const double by0 = bb.y0 - r, by1 = bb.y1 + r;
    const double barea = (bx1 - bx0) * (by1 - by0);
    const Point x{rng.uniform(bx0, bx1), rng.uniform(by0, by1)};
    const Point y{x[0] + r * std::cos(th), x[1] + r * std::sin(th)};
    const double f =
        (E.contains(x) != E.contains(y)) ? M_PI * barea / c : 0.0;
    const double d = f - mean;
    mean += d / k;
    m2 += d * (f - mean);
  }
  const double var = m2 / (n - 1);
  return {near + mean + tail, std::sqrt(var / n)};
}

double boundary_mass_perimeter(const PlanarRegion& E, double s,
                               const FracParams& p) {
  E.validate();
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("boundary_mass_perimeter: s must lie in (0,1)");
  FracParams q = p;
  q.s = s;
  q.eps = 0.0;
  return fractional_mass(E.boundary_current(), q) / (s * s);
}

}  // namespace fracmass
