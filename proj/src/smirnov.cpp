#include "fracmass/smirnov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fracmass/quadrature.hpp"
#include "fracmass/riesz.hpp"

namespace fracmass {

void ApproxParams::validate() const {
  if (!(eps > 0.0 && delta > 0.0 && rho >= 0.0))
    throw std::invalid_argument("ApproxParams: eps, delta > 0 and rho >= 0");
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("ApproxParams: dim must be 2 or 3");
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("ApproxParams: s must lie in (0,1)");
  if (face_quad_order < 2 || mc_samples < 1000)
    throw std::invalid_argument("ApproxParams: quadrature/sample counts too small");
}

Vec Cube::center(int d) const {
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = lo[i] + 0.5 * side;
  return c;
}

namespace {

std::array<int, 3> grid_dims(const Box& B, double eps, int d) {
  std::array<int, 3> n{1, 1, 1};
  for (int i = 0; i < d; ++i)
    n[i] = std::max(1, static_cast<int>(std::ceil(B.side(i) / eps - 1e-12)));
  return n;
}

double profile_bump(double t) {
  return t < 1.0 ? std::exp(-1.0 / (1.0 - t)) : 0.0;
}

}  // namespace

std::vector<Cube> cube_cover(const FieldSpec& psi, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("cube_cover: eps must be > 0");
  const Box& B = psi.support_box();
  const int d = psi.dim();
  const auto n = grid_dims(B, eps, d);
  std::vector<Cube> cubes;
  cubes.reserve(static_cast<std::size_t>(n[0]) * n[1] * n[2]);
  for (int i0 = 0; i0 < n[0]; ++i0)
    for (int i1 = 0; i1 < n[1]; ++i1)
      for (int i2 = 0; i2 < n[2]; ++i2) {
        Cube c;
        c.side = eps;
        c.idx = {i0, i1, i2};
        c.lo = Vec(d);
        for (int a = 0; a < d; ++a) c.lo[a] = B.lo[a] + c.idx[a] * eps;
        cubes.push_back(c);
      }
  return cubes;
}

std::vector<Face> face_fluxes(const FieldSpec& psi,
                              const std::vector<Cube>& cubes, double eps,
                              int quad_order) {
  if (cubes.empty()) return {};
  const int d = psi.dim();
  const Box& B = psi.support_box();
  const auto n = grid_dims(B, eps, d);
  const GaussRule& gr = gauss_legendre(quad_order);
  std::vector<Face> faces;
  for (int a = 0; a < d; ++a) {
    std::array<int, 3> lim = n;
    lim[a] += 1;  // planes
    for (int i0 = 0; i0 < lim[0]; ++i0)
      for (int i1 = 0; i1 < lim[1]; ++i1)
        for (int i2 = 0; i2 < lim[2]; ++i2) {
          Face f;
          f.axis = a;
          f.idx = {i0, i1, i2};
          f.side = eps;
          f.lo = Vec(d);
          for (int c = 0; c < d; ++c) f.lo[c] = B.lo[c] + f.idx[c] * eps;
          // Tensor Gauss of psi_a over the face, global normal +e_a.
          if (d == 2) {
            const int c = 1 - a;
            double s = 0.0;
            for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
              Vec x = f.lo;
              x[c] += eps * 0.5 * (1.0 + gr.nodes[k]);
              s += gr.weights[k] * psi(x)[a];
            }
            f.flux = 0.5 * eps * s;
          } else {
            const int c1 = (a == 0) ? 1 : 0;
            const int c2 = (a == 2) ? 1 : 2;
            double s = 0.0;
            for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
              double row = 0.0;
              for (std::size_t m = 0; m < gr.nodes.size(); ++m) {
                Vec x = f.lo;
                x[c1] += eps * 0.5 * (1.0 + gr.nodes[k]);
                x[c2] += eps * 0.5 * (1.0 + gr.nodes[m]);
                row += gr.weights[m] * psi(x)[a];
              }
              s += gr.weights[k] * row;
            }
            f.flux = 0.25 * eps * eps * s;
          }
          faces.push_back(f);
        }
  }
  return faces;
}

FaceLattice build_lattice(const Face& face, std::size_t face_id, double delta,
                          int dim) {
  if (delta <= 0.0) throw std::invalid_argument("build_lattice: delta must be > 0");
  FaceLattice lat;
  lat.face_id = face_id;
  const double aflux = std::abs(face.flux);
  if (aflux <= 0.0) return lat;
  const double area = std::pow(face.side, dim - 1);
  const double df = std::pow(delta * area / aflux, 1.0 / (dim - 1));
  lat.spacing = df;
  const int m = static_cast<int>(std::floor(face.side / df + 1e-12));
  if (m <= 0) return lat;
  lat.sign = face.flux > 0.0 ? 1 : -1;
  if (dim == 2) {
    const int c = 1 - face.axis;
    for (int k = 0; k < m; ++k) {
      Point p = face.lo;
      p[c] += (k + 0.5) * df;
      lat.points.push_back(p);
    }
  } else {
    const int c1 = (face.axis == 0) ? 1 : 0;
    const int c2 = (face.axis == 2) ? 1 : 2;
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        Point p = face.lo;
        p[c1] += (k + 0.5) * df;
        p[c2] += (l + 0.5) * df;
        lat.points.push_back(p);
      }
  }
  return lat;
}

namespace {

struct AtomRef {
  Point p;
  double along = 0.0;  // position along eta
};

bool atom_less(const AtomRef& x, const AtomRef& y) {
  if (x.along != y.along) return x.along < y.along;
  return x.p < y.p;
}

}  // namespace

CubeMatchResult cylinder_match(const FieldSpec& psi, const Cube& cube,
                               const std::vector<std::pair<Point, int>>& atoms,
                               double rho) {
  const int d = psi.dim();
  CubeMatchResult res;
  res.good.dim = d;

  // sup |psi| over the cube, estimated on a 5^d grid including faces.
  double supn = 0.0;
  const int m = 4;
  std::array<int, 3> it{0, 0, 0};
  const int lim2 = d == 3 ? m : 0;
  for (it[0] = 0; it[0] <= m; ++it[0])
    for (it[1] = 0; it[1] <= m; ++it[1])
      for (it[2] = 0; it[2] <= lim2; ++it[2]) {
        Vec x(d);
        for (int a = 0; a < d; ++a)
          x[a] = cube.lo[a] + cube.side * it[a] / m;
        supn = std::max(supn, norm(psi(x)));
      }

  // Average of psi over the cube (tensor Gauss order 4).
  const GaussRule& gr = gauss_legendre(4);
  Vec avg(d);
  if (d == 2) {
    for (std::size_t i = 0; i < gr.nodes.size(); ++i)
      for (std::size_t j = 0; j < gr.nodes.size(); ++j) {
        Vec x{cube.lo[0] + cube.side * 0.5 * (1.0 + gr.nodes[i]),
              cube.lo[1] + cube.side * 0.5 * (1.0 + gr.nodes[j])};
        avg += (0.25 * gr.weights[i] * gr.weights[j]) * psi(x);
      }
  } else {
    for (std::size_t i = 0; i < gr.nodes.size(); ++i)
      for (std::size_t j = 0; j < gr.nodes.size(); ++j)
        for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
          Vec x{cube.lo[0] + cube.side * 0.5 * (1.0 + gr.nodes[i]),
                cube.lo[1] + cube.side * 0.5 * (1.0 + gr.nodes[j]),
                cube.lo[2] + cube.side * 0.5 * (1.0 + gr.nodes[k])};
          avg += (0.125 * gr.weights[i] * gr.weights[j] * gr.weights[k]) *
                 psi(x);
        }
  }

  if (supn < rho || norm(avg) == 0.0) {
    res.leftovers = atoms;
    return res;
  }
  res.active = true;
  const Vec eta = normalized(avg);

  // Transverse frame: drop the axis most parallel to eta, Gram-Schmidt
  // the remaining standard axes (ascending), deterministic.
  int drop = 0;
  for (int a = 1; a < d; ++a)
    if (std::abs(eta[a]) > std::abs(eta[drop])) drop = a;
  std::vector<Vec> basis;
  for (int a = 0; a < d; ++a) {
    if (a == drop) continue;
    Vec v(d);
    v[a] = 1.0;
    v -= dot(v, eta) * eta;
    for (const auto& b : basis) v -= dot(v, b) * b;
    basis.push_back(normalized(v));
  }

  // Bin atoms into cylinders of square cross-section eps^2.
  const double width = cube.side * cube.side;
  std::map<std::pair<long, long>, std::pair<std::vector<AtomRef>,
                                            std::vector<AtomRef>>>
      bins;
  for (const auto& [p, sgn] : atoms) {
    std::pair<long, long> key{0, 0};
    const Vec rel = p - cube.lo;
    key.first = static_cast<long>(std::floor(dot(rel, basis[0]) / width));
    if (d == 3)
      key.second = static_cast<long>(std::floor(dot(rel, basis[1]) / width));
    AtomRef ar{p, dot(p, eta)};
    if (sgn > 0)
      bins[key].first.push_back(ar);
    else
      bins[key].second.push_back(ar);
  }

  for (auto& [key, pm] : bins) {
    auto& plus = pm.first;
    auto& minus = pm.second;
    std::sort(plus.begin(), plus.end(), atom_less);
    std::sort(minus.begin(), minus.end(), atom_less);
    const std::size_t np = std::min(plus.size(), minus.size());
    for (std::size_t k = 0; k < np; ++k) {
      if (minus[k].p == plus[k].p) continue;  // annihilate in place
      res.good.segments.push_back({minus[k].p, plus[k].p, 1.0});
    }
    for (std::size_t k = np; k < plus.size(); ++k)
      res.leftovers.emplace_back(plus[k].p, 1);
    for (std::size_t k = np; k < minus.size(); ++k)
      res.leftovers.emplace_back(minus[k].p, -1);
  }
  return res;
}

SegmentCurrent greedy_pair(std::vector<std::pair<Point, int>>& atoms, int dim) {
  SegmentCurrent out;
  out.dim = dim;
  std::sort(atoms.begin(), atoms.end(), [](const auto& x, const auto& y) {
    if (!(x.first == y.first)) return x.first < y.first;
    return x.second < y.second;
  });
  std::vector<char> alive(atoms.size(), 1);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!alive[i] || atoms[i].second <= 0) continue;
    // Nearest remaining minus atom; ties by sorted (lex) order.
    std::size_t best = atoms.size();
    double bestd = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (!alive[j] || atoms[j].second >= 0) continue;
      const double dj = dist(atoms[i].first, atoms[j].first);
      if (best == atoms.size() || dj < bestd) {
        best = j;
        bestd = dj;
      }
    }
    if (best == atoms.size()) break;  // minus atoms exhausted
    alive[i] = alive[best] = 0;
    if (bestd > 0.0)
      out.segments.push_back({atoms[best].first, atoms[i].first, 1.0});
  }
  std::vector<std::pair<Point, int>> rest;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (alive[i]) rest.push_back(atoms[i]);
  atoms.swap(rest);
  return out;
}

namespace {

// Smooth test 1-form: e_comp * bump(|x-c|^2 / sigma^2).
struct TestForm {
  int comp;
  Vec center;
  double sigma;

  double scalar(const Vec& x) const {
    return profile_bump(norm2(x - center) / (sigma * sigma));
  }
};

double pair_field_form(const FieldSpec& psi, const TestForm& w) {
  const Box& B = psi.support_box();
  const int d = psi.dim();
  const GaussRule& gr = gauss_legendre(16);
  const int panels = d == 2 ? 6 : 3;
  auto axis_nodes = [&](int ax, std::vector<double>& xs,
                        std::vector<double>& ws) {
    const double a = B.lo[ax], h = B.side(ax) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
        xs.push_back(a + h * (p + 0.5 * (1.0 + gr.nodes[k])));
        ws.push_back(0.5 * h * gr.weights[k]);
      }
  };
  std::vector<double> xs, wx, ys, wy, zs, wz;
  axis_nodes(0, xs, wx);
  axis_nodes(1, ys, wy);
  if (d == 3) axis_nodes(2, zs, wz);
  double sum = 0.0;
  if (d == 2) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const Vec x{xs[i], ys[j]};
        sum += wx[i] * wy[j] * psi(x)[w.comp] * w.scalar(x);
      }
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t k = 0; k < zs.size(); ++k) {
          const Vec x{xs[i], ys[j], zs[k]};
          sum += wx[i] * wy[j] * wz[k] * psi(x)[w.comp] * w.scalar(x);
        }
  }
  return sum;
}

double pair_current_form(const SegmentCurrent& mu, const TestForm& w) {
  const GaussRule& gr = gauss_legendre(8);
  double sum = 0.0, comp = 0.0;
  for (const auto& seg : mu.segments) {
    const double L = seg.length();
    const Vec tau = seg.tangent();
    double line = 0.0;
    for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
      const Vec x = seg.at(0.5 * (1.0 + gr.nodes[k]));
      line += gr.weights[k] * w.scalar(x);
    }
    const double term = seg.w * tau[w.comp] * 0.5 * L * line;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

ApproxResult approximate(const FieldSpec& psi, const ApproxParams& p) {
  p.validate();
  const int d = psi.dim();
  if (d != p.dim)
    throw std::invalid_argument("approximate: field/params dimension mismatch");

  ApproxResult out;
  out.current.dim = d;
  Diagnostics& dg = out.diag;

  const auto cubes = cube_cover(psi, p.eps);
  const auto faces = face_fluxes(psi, cubes, p.eps, p.face_quad_order);
  dg.cubes_total = static_cast<long>(cubes.size());

  std::vector<FaceLattice> lattices(faces.size());
  std::map<std::array<int, 4>, std::size_t> face_at;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    lattices[i] = build_lattice(faces[i], i, p.delta, d);
    dg.atoms_total += static_cast<long>(lattices[i].points.size());
    face_at[{faces[i].axis, faces[i].idx[0], faces[i].idx[1],
             faces[i].idx[2]}] = i;
  }

  std::vector<std::pair<Point, int>> pool;
  std::vector<OrientedSegment> segs;
  for (const auto& cube : cubes) {
    std::vector<std::pair<Point, int>> atoms;
    for (int a = 0; a < d; ++a) {
      for (int hi = 0; hi <= 1; ++hi) {
        std::array<int, 4> key{a, cube.idx[0], cube.idx[1], cube.idx[2]};
        key[1 + a] += hi;
        const FaceLattice& lat = lattices[face_at.at(key)];
        if (lat.sign == 0) continue;
        // hi face: outward normal +e_a, local sign = lattice sign;
        // lo face: outward normal -e_a, local sign flips.
        const int local = hi ? lat.sign : -lat.sign;
        for (const auto& pt : lat.points) atoms.emplace_back(pt, local);
      }
    }
    if (atoms.empty()) continue;
    CubeMatchResult r = cylinder_match(psi, cube, atoms, p.rho);
    if (r.active) ++dg.cubes_active;
    dg.segments_good += static_cast<long>(r.good.segments.size());
    dg.leftovers += static_cast<long>(r.leftovers.size());
    segs.insert(segs.end(), r.good.segments.begin(), r.good.segments.end());
    SegmentCurrent bmatch = greedy_pair(r.leftovers, d);
    dg.segments_boundary += static_cast<long>(bmatch.segments.size());
    segs.insert(segs.end(), bmatch.segments.begin(), bmatch.segments.end());
    pool.insert(pool.end(), r.leftovers.begin(), r.leftovers.end());
  }

  dg.unpaired_after_boundary = static_cast<long>(pool.size());
  SegmentCurrent closing = greedy_pair(pool, d);
  dg.segments_closing = static_cast<long>(closing.segments.size());
  segs.insert(segs.end(), closing.segments.begin(), closing.segments.end());
  if (!pool.empty())
    throw std::runtime_error(
        "approximate: global charge imbalance after closing (face bug)");

  for (auto& s : segs) s.w = p.delta;
  out.current.segments = std::move(segs);

  if (!out.current.segments.empty()) {
    if (!boundary(out.current, 0.0).empty())
      throw std::runtime_error("approximate: output current has boundary");
    out.loops = loop_decompose(out.current, 0.0, p.delta);
  }
  dg.loops = static_cast<long>(out.loops.size());

  // Diagnostics.
  dg.mass_mu = out.current.total_mass();
  dg.mass_psi = psi.l1_norm(d == 2 ? 200 : 96);

  const Box& B = psi.support_box();
  Vec c0(d);
  double minside = B.side(0);
  for (int a = 0; a < d; ++a) {
    c0[a] = 0.5 * (B.lo[a] + B.hi[a]);
    minside = std::min(minside, B.side(a));
  }
  Vec off(d);
  off[0] = 0.17 * B.side(0);
  off[1] = 0.09 * B.side(1);
  std::vector<TestForm> panel;
  for (double scale : {0.35, 0.2, 0.1})
    for (int comp = 0; comp < d; ++comp)
      panel.push_back(TestForm{comp, c0 + off, scale * minside});
  double denom = 0.0;
  std::vector<double> raw;
  for (const auto& w : panel) {
    const double pw = pair_field_form(psi, w);
    denom = std::max(denom, std::abs(pw));
    raw.push_back(pair_current_form(out.current, w) - pw);
  }
  if (denom == 0.0) denom = 1.0;
  for (double e : raw) {
    dg.pairing_errs.push_back(std::abs(e) / denom);
    dg.pairing_err_max = std::max(dg.pairing_err_max, std::abs(e) / denom);
  }

  if (!out.current.segments.empty()) {
    if (static_cast<long>(out.current.segments.size()) <= p.exact_mass_cutoff) {
      FracParams fp;
      fp.s = p.s;
      dg.ms_mu = fractional_mass(out.current, fp);
      dg.ms_mu_stderr = 0.0;
    } else {
      auto [est, se] =
          fractional_mass_mc(out.current, p.s, p.mc_samples, p.seed);
      dg.ms_mu = est;
      dg.ms_mu_stderr = se;
    }
  }
  auto [fe, fse] = field_riesz_energy(psi, p.s, p.mc_samples, p.seed + 1);
  dg.ms_psi = fe;
  dg.ms_psi_stderr = fse;
  return out;
}

}  // namespace fracmass
