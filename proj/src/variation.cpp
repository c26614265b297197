#include "fracmass/variation.hpp"

#include <algorithm>
#include <cmath>

#include "fracmass/quadrature.hpp"

namespace fracmass {

void Perturbation::validate() const {
  curve.validate();
  if (curve.closed)
    throw std::invalid_argument("Perturbation: curve must be open");
  if (values.size() != curve.vertices.size())
    throw std::invalid_argument("Perturbation: one value per vertex required");
  const int d = curve.dim();
  for (const auto& v : values)
    if (v.dim() != d)
      throw std::invalid_argument("Perturbation: dimension mismatch");
  if (norm(values.front()) != 0.0 || norm(values.back()) != 0.0)
    throw std::invalid_argument("Perturbation: h must vanish at endpoints");
}

namespace {

// Combined first-variation bracket of the curvature integrand. Both
// raw terms diverge like r^{-1-s}; combined they stay integrable.
inline Vec curvature_bracket(const Vec& diff, const Vec& tu, const Vec& tv) {
  return dot(diff, tu) * tv - dot(tu, tv) * diff;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double dd = norm2(d);
  double t = dd > 0.0 ? dot(p - a, d) / dd : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * d);
}

// Integral of the curvature integrand over a straight piece [x0, x1]
// with constant tangent te, recursively refined toward pu.
Vec curvature_piece(const Vec& pu, const Vec& tu, const Vec& x0, const Vec& x1,
                    const Vec& te, double s, const QuadConfig& q, int depth) {
  const double len = dist(x0, x1);
  const double dmin = point_segment_distance(pu, x0, x1);
  if (dmin >= q.near_ratio * len || depth <= 0) {
    const GaussRule& r = gauss_legendre(q.gauss_order);
    Vec acc(pu.dim());
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
      const double u = 0.5 * (1.0 + r.nodes[k]);
      const Vec y = x0 + u * (x1 - x0);
      const Vec diff = pu - y;
      const double rr = norm(diff);
      acc += (r.weights[k] * std::pow(rr, -(2.0 + s))) *
             curvature_bracket(diff, tu, te);
    }
    return 0.5 * len * acc;
  }
  const Vec mid = 0.5 * (x0 + x1);
  return curvature_piece(pu, tu, x0, mid, te, s, q, depth - 1) +
         curvature_piece(pu, tu, mid, x1, te, s, q, depth - 1);
}

struct LocalModel {
  Vec d1, d2;       // gamma(t) ~ p + t d1 + t^2/2 d2
  double h_prev, h_next;
};

LocalModel quadratic_model(const PolyCurve& c, int u) {
  const int n = static_cast<int>(c.vertices.size());
  const Vec& p = c.vertices[u];
  const Vec& pm = c.vertices[(u - 1 + n) % n];
  const Vec& pp = c.vertices[(u + 1) % n];
  const double h1 = dist(p, pm), h2 = dist(p, pp);
  // Solve -h1 d1 + h1^2/2 d2 = pm - p ; h2 d1 + h2^2/2 d2 = pp - p.
  const Vec rm = pm - p, rp = pp - p;
  const double det = -h1 * (h2 * h2) * 0.5 - h2 * (h1 * h1) * 0.5;
  LocalModel m;
  m.h_prev = h1;
  m.h_next = h2;
  m.d1 = (1.0 / det) * ((h2 * h2) * 0.5 * rm - (h1 * h1) * 0.5 * rp);
  m.d2 = (1.0 / det) * (-h2 * rm - h1 * rp);
  return m;
}

Vec curvature_core(const PolyCurve& c, int u, double s, const QuadConfig& q) {
  const int n = static_cast<int>(c.vertices.size());
  const Vec& pu = c.vertices[u];
  const LocalModel m = quadratic_model(c, u);
  const Vec tu = normalized(m.d1);

  // Near field: the span of the two incident edges, on the quadratic
  // reconstruction (the straight edges carry a vanishing bracket).
  // Below t0 the integrand is B a^{-2-s} t^{-s} to leading order, with
  // B the t^2 coefficient of the bracket; that piece goes in closed
  // form — as s -> 1 almost all of the integral lives below any fixed
  // scale, so no dyadic depth can reach it numerically.
  Vec acc(pu.dim());
  const double a1 = norm(m.d1);
  const Vec B = 0.5 * (dot(m.d2, tu) * m.d1 - a1 * m.d2);
  const double apow = std::pow(a1, -(2.0 + s));
  for (double side : {-1.0, 1.0}) {
    const double span = side < 0 ? m.h_prev : m.h_next;
    const double t0 = 1e-3 * span;
    acc += (apow * std::pow(t0, 1.0 - s) / (1.0 - s)) * B;
    // Dyadic panels from span down to t0.
    const GaussRule& gr = gauss_legendre(std::max(q.gauss_order, 8));
    double hi = span;
    while (hi > t0) {
      const double lo = std::max(t0, 0.5 * hi);
      for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
        const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gr.nodes[k];
        const double tt = side * t;
        const Vec y = pu + tt * m.d1 + (0.5 * tt * tt) * m.d2;
        const Vec ty = m.d1 + tt * m.d2;
        const Vec diff = pu - y;
        const double rr = norm(diff);
        if (rr <= 0.0) continue;
        acc += (0.5 * (hi - lo) * gr.weights[k] *
                std::pow(rr, -(2.0 + s))) *
               curvature_bracket(diff, tu, ty);
      }
      hi = lo;
    }
  }

  // Far field: every edge not incident to u, on the polygon.
  const int ne = static_cast<int>(c.edge_count());
  for (int e = 0; e < ne; ++e) {
    if (e == u || (e + 1) % n == u) continue;  // incident edges
    const OrientedSegment seg = c.edge(e);
    acc += curvature_piece(pu, tu, seg.a, seg.b, seg.tangent(), s, q,
                           q.near_split_depth);
  }
  return s * acc;
}

void check_curvature_pre(const PolyCurve& c, int u_index, double s) {
  c.validate();
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("fractional_curvature: s must lie in (0,1)");
  if (c.vertices.size() < 8)
    throw std::invalid_argument("fractional_curvature: need >= 8 vertices");
  const int n = static_cast<int>(c.vertices.size());
  if (u_index < 0 || u_index >= n)
    throw std::invalid_argument("fractional_curvature: vertex index out of range");
  if (!c.closed && (u_index == 0 || u_index == n - 1))
    throw std::invalid_argument(
        "fractional_curvature: interior vertex required for open curves");
}

}  // namespace

Vec fractional_curvature(const PolyCurve& c, int u_index, double s,
                         const QuadConfig& quad) {
  check_curvature_pre(c, u_index, s);
  if (self_intersects(c, 1e-9))
    throw std::invalid_argument("fractional_curvature: self-intersecting curve");
  return curvature_core(c, u_index, s, quad);
}

namespace {

struct EdgeData {
  Vec x0, x1;   // endpoints
  Vec h0, h1;   // perturbation at endpoints
  Vec tau;      // unit tangent
  Vec hdot;     // dh/du on the edge (constant)
  double len;
};

// First-variation integrand over a sub-rectangle of edge_i x edge_j,
// recursively refined where the blocks are near.
double fv_block(const EdgeData& ei, const EdgeData& ej, double ua, double ub,
                double va, double vb, double s, const QuadConfig& q,
                int depth) {
  const Vec xa = ei.x0 + ua * (ei.x1 - ei.x0), xb = ei.x0 + ub * (ei.x1 - ei.x0);
  const Vec ya = ej.x0 + va * (ej.x1 - ej.x0), yb = ej.x0 + vb * (ej.x1 - ej.x0);
  const double la = (ub - ua) * ei.len, lb = (vb - va) * ej.len;
  const double size = std::max(la, lb);
  const Vec ca = 0.5 * (xa + xb), cb = 0.5 * (ya + yb);
  const double gap = dist(ca, cb) - 0.5 * la - 0.5 * lb;
  if (gap >= q.near_ratio * size || depth <= 0) {
    const GaussRule& r = gauss_legendre(q.gauss_order);
    const double tt = dot(ei.tau, ej.tau);
    double sum = 0.0;
    for (std::size_t a = 0; a < r.nodes.size(); ++a) {
      const double u = ua + (ub - ua) * 0.5 * (1.0 + r.nodes[a]);
      const Vec x = ei.x0 + u * (ei.x1 - ei.x0);
      const Vec hx = ei.h0 + u * (ei.h1 - ei.h0);
      double row = 0.0;
      for (std::size_t b = 0; b < r.nodes.size(); ++b) {
        const double v = va + (vb - va) * 0.5 * (1.0 + r.nodes[b]);
        const Vec y = ej.x0 + v * (ej.x1 - ej.x0);
        const Vec hy = ej.h0 + v * (ej.h1 - ej.h0);
        const Vec diff = x - y;
        const double rr = norm(diff);
        const double t1 = dot(ei.hdot, ej.tau) * std::pow(rr, -s);
        const double t2 = 0.5 * s * tt * dot(diff, hx - hy) *
                          std::pow(rr, -(2.0 + s));
        row += r.weights[b] * (t1 - t2);
      }
      sum += r.weights[a] * row;
    }
    return 0.25 * la * lb * sum;
  }
  const double um = 0.5 * (ua + ub), vm = 0.5 * (va + vb);
  return fv_block(ei, ej, ua, um, va, vm, s, q, depth - 1) +
         fv_block(ei, ej, ua, um, vm, vb, s, q, depth - 1) +
         fv_block(ei, ej, um, ub, va, vm, s, q, depth - 1) +
         fv_block(ei, ej, um, ub, vm, vb, s, q, depth - 1);
}

}  // namespace

double first_variation(const PolyCurve& c, const Perturbation& h, double s,
                       const QuadConfig& quad) {
  c.validate();
  h.validate();
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("first_variation: s must lie in (0,1)");
  if (c.closed) throw std::invalid_argument("first_variation: open curve required");
  if (h.curve.vertices.size() != c.vertices.size())
    throw std::invalid_argument("first_variation: perturbation/curve mismatch");

  const std::size_t ne = c.edge_count();
  std::vector<EdgeData> edges(ne);
  for (std::size_t i = 0; i < ne; ++i) {
    OrientedSegment seg = c.edge(i);
    EdgeData& e = edges[i];
    e.x0 = seg.a;
    e.x1 = seg.b;
    e.h0 = h.values[i];
    e.h1 = h.values[i + 1];
    e.len = seg.length();
    e.tau = seg.tangent();
    e.hdot = (1.0 / e.len) * (e.h1 - e.h0);
  }

  double sum = 0.0, comp = 0.0;
  auto add = [&](double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  for (std::size_t i = 0; i < ne; ++i) {
    // Same-edge block in closed form: the combined integrand reduces to
    // (hdot . tau)(1 - s/2) |u-v|^{-s}.
    add(dot(edges[i].hdot, edges[i].tau) * (1.0 - 0.5 * s) *
        self_energy_segment(edges[i].len, s));
    for (std::size_t j = 0; j < ne; ++j) {
      if (i == j) continue;
      add(fv_block(edges[i], edges[j], 0.0, 1.0, 0.0, 1.0, s, quad,
                   quad.near_split_depth));
    }
  }
  return 2.0 * c.weight * c.weight * sum;
}

PolyCurve gradient_flow_step(const PolyCurve& c, double s, double dt,
                             const QuadConfig& quad) {
  c.validate();
  if (dt < 0.0) throw std::invalid_argument("gradient_flow_step: dt must be >= 0");
  if (!c.closed)
    throw std::invalid_argument("gradient_flow_step: closed curve required");
  if (dt == 0.0) return c;
  if (self_intersects(c, 1e-9))
    throw SelfIntersectionError("gradient_flow_step: input self-intersects");
  const int n = static_cast<int>(c.vertices.size());
  PolyCurve stepped = c;
  for (int i = 0; i < n; ++i) {
    check_curvature_pre(c, i, s);
    stepped.vertices[i] = c.vertices[i] - dt * curvature_core(c, i, s, quad);
  }
  PolyCurve out = resample_arclength(stepped, n);
  if (self_intersects(out, 1e-9))
    throw SelfIntersectionError("gradient_flow_step: step self-intersects");
  return out;
}

}  // namespace fracmass
