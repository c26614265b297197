#include "fracmass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fracmass {

OrientedSegment PolyCurve::edge(std::size_t i) const {
  const Point& a = vertices[i];
  const Point& b = vertices[(i + 1) % vertices.size()];
  return OrientedSegment{a, b, weight};
}

double PolyCurve::length() const {
  double L = 0.0;
  for (std::size_t i = 0; i < edge_count(); ++i) L += edge(i).length();
  return L;
}

void PolyCurve::validate() const {
  if (vertices.size() < 2)
    throw std::invalid_argument("PolyCurve: need at least 2 vertices");
  const int d = dim();
  if (d < 2) throw std::invalid_argument("PolyCurve: dimension must be >= 2");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i].dim() != d)
      throw std::invalid_argument("PolyCurve: mixed vertex dimensions");
    if (!vertices[i].finite())
      throw std::invalid_argument("PolyCurve: non-finite vertex");
  }
  for (std::size_t i = 0; i < edge_count(); ++i) {
    if (vertices[i] == vertices[(i + 1) % vertices.size()])
      throw std::invalid_argument("PolyCurve: degenerate edge at index " +
                                  std::to_string(i));
  }
  if (closed && vertices.size() < 3)
    throw std::invalid_argument("PolyCurve: closed curve needs >= 3 vertices");
}

double SegmentCurrent::total_mass() const {
  double m = 0.0;
  for (const auto& s : segments) m += std::abs(s.w) * s.length();
  return m;
}

void SegmentCurrent::append(const SegmentCurrent& other) {
  if (other.segments.empty()) return;
  if (segments.empty()) dim = other.dim;
  if (dim != other.dim)
    throw std::invalid_argument("SegmentCurrent: dimension mismatch");
  segments.insert(segments.end(), other.segments.begin(),
                  other.segments.end());
}

SegmentCurrent curve_to_current(const PolyCurve& c) {
  c.validate();
  SegmentCurrent mu;
  mu.dim = c.dim();
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    if (c.weight == 0.0) continue;
    mu.segments.push_back(c.edge(i));
  }
  return mu;
}

SegmentCurrent curves_to_current(const std::vector<PolyCurve>& cs) {
  SegmentCurrent mu;
  for (const auto& c : cs) mu.append(curve_to_current(c));
  return mu;
}

double default_merge_tol(const SegmentCurrent& mu) {
  if (mu.segments.empty()) return 0.0;
  const int d = mu.dim;
  Vec lo(d, 1e300), hi(d, -1e300);
  for (const auto& s : mu.segments)
    for (const Point* p : {&s.a, &s.b})
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], (*p)[i]);
        hi[i] = std::max(hi[i], (*p)[i]);
      }
  return 1e-9 * dist(lo, hi);
}

namespace {

// Merge points within tol by sorting lexicographically and chaining
// neighbors. Returns the representative index for every input point.
std::vector<int> merge_points(const std::vector<Point>& pts, double tol,
                              std::vector<Point>& reps) {
  const std::size_t n = pts.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return pts[i] < pts[j]; });
  std::vector<int> rep_of(n, -1);
  reps.clear();
  if (tol == 0.0) {
    // Exact duplicates are adjacent after the lexicographic sort.
    for (std::size_t k = 0; k < n; ++k) {
      int i = order[k];
      if (k == 0 || pts[order[k - 1]] < pts[i]) reps.push_back(pts[i]);
      rep_of[i] = static_cast<int>(reps.size()) - 1;
    }
    return rep_of;
  }
  for (std::size_t k = 0; k < n; ++k) {
    int i = order[k];
    if (rep_of[i] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(pts[i]);
    rep_of[i] = id;
    // Points sorted lexicographically; anything within tol of pts[i]
    // has first coordinate within tol.
    for (std::size_t m = k + 1; m < n; ++m) {
      int j = order[m];
      if (pts[j][0] - pts[i][0] > tol) break;
      if (rep_of[j] < 0 && dist(pts[i], pts[j]) <= tol) rep_of[j] = id;
    }
  }
  return rep_of;
}

}  // namespace

BoundaryChain boundary(const SegmentCurrent& mu, double tol) {
  if (tol < 0.0) throw std::invalid_argument("boundary: negative tolerance");
  std::vector<Point> pts;
  pts.reserve(2 * mu.segments.size());
  for (const auto& s : mu.segments) {
    pts.push_back(s.a);
    pts.push_back(s.b);
  }
  std::vector<Point> reps;
  std::vector<int> rep_of = merge_points(pts, tol, reps);
  std::vector<double> charge(reps.size(), 0.0);
  for (std::size_t i = 0; i < mu.segments.size(); ++i) {
    charge[rep_of[2 * i]] -= mu.segments[i].w;      // start
    charge[rep_of[2 * i + 1]] += mu.segments[i].w;  // end
  }
  BoundaryChain bc;
  bc.merge_tol = tol;
  double scale = 0.0;
  for (const auto& s : mu.segments) scale = std::max(scale, std::abs(s.w));
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (std::abs(charge[i]) > 1e-12 * std::max(scale, 1.0))
      bc.atoms.push_back({reps[i], charge[i]});
  }
  return bc;
}

namespace {

// GCD-like weight quantum with relative tolerance 1e-6.
double detect_quantum(const SegmentCurrent& mu) {
  double g = 0.0;
  for (const auto& s : mu.segments) {
    double w = std::abs(s.w);
    if (g == 0.0) {
      g = w;
      continue;
    }
    // Euclid on reals, stopping at the tolerance floor.
    double a = std::max(g, w), b = std::min(g, w);
    while (b > 1e-6 * a) {
      double r = std::fmod(a, b);
      if (r > b * (1.0 - 1e-6)) r = 0.0;  // fmod landed just under b
      if (r < 1e-6 * b) r = 0.0;
      a = b;
      b = r;
      if (b == 0.0) break;
    }
    g = a;
  }
  return g;
}

}  // namespace

std::vector<PolyCurve> loop_decompose(const SegmentCurrent& mu, double tol,
                                      double quantum) {
  if (mu.segments.empty()) return {};
  BoundaryChain bc = boundary(mu, tol);
  if (!bc.empty()) {
    std::string msg = "loop_decompose: nonzero boundary at";
    for (std::size_t i = 0; i < std::min<std::size_t>(bc.atoms.size(), 4); ++i) {
      msg += " (";
      for (int k = 0; k < bc.atoms[i].p.dim(); ++k)
        msg += (k ? "," : "") + std::to_string(bc.atoms[i].p[k]);
      msg += ")";
    }
    throw std::invalid_argument(msg);
  }
  double q = quantum > 0.0 ? quantum : detect_quantum(mu);
  if (q <= 0.0) throw std::invalid_argument("loop_decompose: no weight quantum");
  for (const auto& s : mu.segments) {
    double m = std::abs(s.w) / q;
    if (std::abs(m - std::round(m)) > 1e-6 * std::max(m, 1.0))
      throw std::invalid_argument(
          "loop_decompose: weights not commensurable with quantum");
  }

  // Node ids: merged endpoints, renumbered in lexicographic order so the
  // extraction order is independent of segment order.
  std::vector<Point> pts;
  for (const auto& s : mu.segments) {
    pts.push_back(s.a);
    pts.push_back(s.b);
  }
  std::vector<Point> reps;
  std::vector<int> rep_of = merge_points(pts, tol, reps);

  struct Edge {
    int from, to;
    bool used = false;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < mu.segments.size(); ++i) {
    int a = rep_of[2 * i], b = rep_of[2 * i + 1];
    if (a == b) continue;  // below merge tolerance
    int mult = static_cast<int>(std::round(std::abs(mu.segments[i].w) / q));
    bool fwd = mu.segments[i].w > 0.0;
    for (int m = 0; m < mult; ++m)
      edges.push_back(fwd ? Edge{a, b} : Edge{b, a});
  }

  std::vector<std::vector<int>> out(reps.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    out[edges[e].from].push_back(static_cast<int>(e));
  // Deterministic extraction: smallest target point first.
  for (auto& lst : out)
    std::sort(lst.begin(), lst.end(), [&](int e1, int e2) {
      if (reps[edges[e1].to] < reps[edges[e2].to]) return true;
      if (reps[edges[e2].to] < reps[edges[e1].to]) return false;
      return e1 < e2;
    });
  std::vector<std::size_t> next(reps.size(), 0);

  std::vector<int> start_order(reps.size());
  std::iota(start_order.begin(), start_order.end(), 0);
  std::sort(start_order.begin(), start_order.end(),
            [&](int i, int j) { return reps[i] < reps[j]; });

  std::vector<PolyCurve> loops;
  for (int start : start_order) {
    while (next[start] < out[start].size()) {
      if (edges[out[start][next[start]]].used) {
        ++next[start];
        continue;
      }
      // Hierholzer walk; in-degree == out-degree guarantees closure.
      std::vector<int> cycle;
      int v = start;
      while (true) {
        while (next[v] < out[v].size() && edges[out[v][next[v]]].used)
          ++next[v];
        if (next[v] >= out[v].size()) break;
        int e = out[v][next[v]];
        edges[e].used = true;
        cycle.push_back(v);
        v = edges[e].to;
        if (v == start) break;
      }
      if (cycle.empty()) continue;
      PolyCurve c;
      c.closed = true;
      c.weight = q;
      for (int node : cycle) c.vertices.push_back(reps[node]);
      // Drop collinear repeats is unnecessary; just guard degenerate size.
      if (c.vertices.size() >= 2) loops.push_back(std::move(c));
    }
  }
  return loops;
}

SegmentCurrent transform(const SegmentCurrent& mu, double scale,
                         const Point& shift) {
  if (scale <= 0.0) throw std::invalid_argument("transform: scale must be > 0");
  SegmentCurrent out = mu;
  for (auto& s : out.segments) {
    s.a = scale * s.a + shift;
    s.b = scale * s.b + shift;
  }
  return out;
}

PolyCurve sample_smooth_curve(CurveKind kind, const std::vector<double>& params,
                              int n) {
  PolyCurve c;
  auto need = [&](std::size_t k) {
    if (params.size() < k)
      throw std::invalid_argument("sample_smooth_curve: missing parameters");
    for (std::size_t i = 0; i < k; ++i)
      if (params[i] <= 0.0)
        throw std::invalid_argument("sample_smooth_curve: parameters must be positive");
  };
  switch (kind) {
    case CurveKind::Circle: {
      need(1);
      if (n < 3) throw std::invalid_argument("circle: n >= 3 required");
      double r = params[0];
      c.closed = true;
      for (int i = 0; i < n; ++i) {
        double t = 2.0 * M_PI * i / n;
        c.vertices.push_back({r * std::cos(t), r * std::sin(t)});
      }
      break;
    }
    case CurveKind::Ellipse: {
      need(2);
      if (n < 3) throw std::invalid_argument("ellipse: n >= 3 required");
      c.closed = true;
      for (int i = 0; i < n; ++i) {
        double t = 2.0 * M_PI * i / n;
        c.vertices.push_back({params[0] * std::cos(t), params[1] * std::sin(t)});
      }
      break;
    }
    case CurveKind::Helix: {
      need(3);
      if (n < 2) throw std::invalid_argument("helix: n >= 2 required");
      double r = params[0], pitch = params[1], turns = params[2];
      for (int i = 0; i < n; ++i) {
        double t = 2.0 * M_PI * turns * i / (n - 1);
        c.vertices.push_back(
            {r * std::cos(t), r * std::sin(t), pitch * t / (2.0 * M_PI)});
      }
      break;
    }
    case CurveKind::Segment: {
      need(1);
      if (n < 2) throw std::invalid_argument("segment: n >= 2 required");
      double L = params[0];
      for (int i = 0; i < n; ++i)
        c.vertices.push_back({L * i / (n - 1), 0.0});
      break;
    }
  }
  c.validate();
  return c;
}

CurveKind parse_curve_kind(const std::string& name) {
  if (name == "circle") return CurveKind::Circle;
  if (name == "ellipse") return CurveKind::Ellipse;
  if (name == "helix") return CurveKind::Helix;
  if (name == "segment") return CurveKind::Segment;
  throw std::invalid_argument("unknown curve kind: " + name);
}

PolyCurve resample_arclength(const PolyCurve& c, int n) {
  c.validate();
  const std::size_t ne = c.edge_count();
  std::vector<double> cum(ne + 1, 0.0);
  for (std::size_t i = 0; i < ne; ++i) cum[i + 1] = cum[i] + c.edge(i).length();
  const double L = cum[ne];
  PolyCurve out;
  out.closed = c.closed;
  out.weight = c.weight;
  const int steps = c.closed ? n : n - 1;
  if (steps < 1) throw std::invalid_argument("resample_arclength: n too small");
  for (int i = 0; i < n; ++i) {
    double t = L * i / steps;
    auto it = std::upper_bound(cum.begin(), cum.end(), t);
    std::size_t e = std::min<std::size_t>(it - cum.begin() - 1, ne - 1);
    double local = (t - cum[e]) / (cum[e + 1] - cum[e]);
    out.vertices.push_back(c.edge(e).at(local));
  }
  if (!c.closed) out.vertices.back() = c.vertices.back();
  return out;
}

double segment_distance(const OrientedSegment& A, const OrientedSegment& B) {
  // Eberly's closed-form clamped minimization.
  Vec d1 = A.b - A.a, d2 = B.b - B.a, r = A.a - B.a;
  double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  double cc = dot(d1, r), bb = dot(d1, d2);
  double denom = a * e - bb * bb;
  double s = 0.0, t = 0.0;
  if (denom > 1e-14 * a * e) s = std::clamp((bb * f - cc * e) / denom, 0.0, 1.0);
  t = (bb * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-cc / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((bb - cc) / a, 0.0, 1.0);
  }
  return dist(A.a + s * d1, B.a + t * d2);
}

bool self_intersects(const PolyCurve& c, double tol) {
  const std::size_t ne = c.edge_count();
  for (std::size_t i = 0; i < ne; ++i) {
    OrientedSegment ei = c.edge(i);
    for (std::size_t j = i + 2; j < ne; ++j) {
      if (c.closed && i == 0 && j == ne - 1) continue;  // adjacent via wrap
      if (segment_distance(ei, c.edge(j)) < tol) return true;
    }
  }
  return false;
}

}  // namespace fracmass
