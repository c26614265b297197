#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "fracmass/fields.hpp"
#include "fracmass/geometry.hpp"
#include "fracmass/smirnov.hpp"

using namespace fracmass;

namespace {

FieldSpec box_field(int d, const Vec& lo, const Vec& hi,
                    std::function<Vec(const Vec&)> f) {
  return FieldSpec::custom(d, Box{lo, hi}, std::move(f));
}

}  // namespace

TEST_CASE("cube_cover: counts match the grid") {
  FieldSpec f2 = box_field(2, Vec{0, 0}, Vec{1, 1},
                           [](const Vec&) { return Vec{0, 0}; });
  CHECK(cube_cover(f2, 0.25).size() == 16);
  CHECK(cube_cover(f2, 2.0).size() == 1);

  FieldSpec f3 = box_field(3, Vec{0, 0, 0}, Vec{1, 1, 1},
                           [](const Vec&) { return Vec{0, 0, 0}; });
  CHECK(cube_cover(f3, 0.5).size() == 8);
  CHECK_THROWS_AS(cube_cover(f3, 0.0), std::invalid_argument);
}

TEST_CASE("face_fluxes: zero field gives zero flux everywhere") {
  FieldSpec f = box_field(2, Vec{0, 0}, Vec{1, 1},
                          [](const Vec&) { return Vec{0, 0}; });
  auto cubes = cube_cover(f, 0.5);
  for (const auto& face : face_fluxes(f, cubes, 0.5, 8))
    CHECK(face.flux == 0.0);
}

namespace {

// Max per-cube outward flux sum relative to the largest face flux.
double max_cube_divergence(const FieldSpec& psi, double eps, int order) {
  auto cubes = cube_cover(psi, eps);
  auto faces = face_fluxes(psi, cubes, eps, order);
  std::map<std::array<int, 4>, double> flux_at;
  double scale = 0.0;
  for (const auto& f : faces) {
    flux_at[{f.axis, f.idx[0], f.idx[1], f.idx[2]}] = f.flux;
    scale = std::max(scale, std::abs(f.flux));
  }
  double worst = 0.0;
  for (const auto& c : cubes) {
    double out = 0.0;
    for (int a = 0; a < psi.dim(); ++a) {
      std::array<int, 4> lo{a, c.idx[0], c.idx[1], c.idx[2]};
      std::array<int, 4> hi = lo;
      hi[1 + a] += 1;
      out += flux_at.at(hi) - flux_at.at(lo);
    }
    worst = std::max(worst, std::abs(out));
  }
  return worst / scale;
}

}  // namespace

TEST_CASE("face_fluxes: per-cube flux sum vanishes when quadrature is exact") {
  // Polynomial divergence-free field: tensor Gauss integrates the face
  // fluxes exactly, so each cube's outward sum is zero to roundoff.
  FieldSpec poly = FieldSpec::custom(
      2, Box{Vec{0, 0}, Vec{1, 1}},
      [](const Vec& x) {
        return Vec{x[0] * x[0] * x[1] + 2.0 * x[1],
                   -x[0] * x[1] * x[1] + 3.0 * x[0]};
      });
  CHECK(max_cube_divergence(poly, 0.25, 8) < 1e-12);
}

TEST_CASE("face_fluxes: per-cube flux sum converges for the curl bump") {
  // For the non-polynomial bump the per-cube sum is pure quadrature
  // error; it must shrink rapidly as the face rule is refined.
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  const double e8 = max_cube_divergence(psi, 0.25, 8);
  const double e24 = max_cube_divergence(psi, 0.25, 24);
  CHECK(e8 < 1e-3);
  CHECK(e24 < 1e-7);
  CHECK(e24 < 0.01 * e8);
}

TEST_CASE("face_fluxes: shared faces are stored once (bitwise consistency)") {
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  auto cubes = cube_cover(psi, 0.5);
  auto faces = face_fluxes(psi, cubes, 0.5, 8);
  std::map<std::array<int, 4>, int> seen;
  for (const auto& f : faces) ++seen[{f.axis, f.idx[0], f.idx[1], f.idx[2]}];
  for (const auto& [key, count] : seen) CHECK(count == 1);
}

TEST_CASE("build_lattice: spacing formula and counts") {
  Face f;
  f.axis = 0;
  f.lo = Vec{0, 0};
  f.side = 1.0;
  const double delta = 0.01;

  // Flux chosen so d_F = 0.1 exactly: |flux| = delta * area / d_F.
  f.flux = delta * 1.0 / 0.1;
  FaceLattice lat = build_lattice(f, 0, delta, 2);
  CHECK(lat.spacing == doctest::Approx(0.1));
  CHECK(lat.points.size() == 10);
  CHECK(lat.sign == 1);
  for (const auto& p : lat.points) CHECK(p[0] == 0.0);  // on the face
  CHECK(lat.points.front()[1] == doctest::Approx(0.05));

  f.flux = -f.flux;
  CHECK(build_lattice(f, 0, delta, 2).sign == -1);

  f.flux = 0.0;
  FaceLattice empty = build_lattice(f, 0, delta, 2);
  CHECK(empty.sign == 0);
  CHECK(empty.points.empty());
}

TEST_CASE("build_lattice: doubling delta scales spacing by 2^(1/(d-1))") {
  Face f;
  f.axis = 1;
  f.lo = Vec{0, 0};
  f.side = 1.0;
  f.flux = 0.037;
  const double s1 = build_lattice(f, 0, 1e-3, 2).spacing;
  const double s2 = build_lattice(f, 0, 2e-3, 2).spacing;
  CHECK(s2 / s1 == doctest::Approx(2.0));  // d = 2: exponent 1

  Face f3;
  f3.axis = 2;
  f3.lo = Vec{0, 0, 0};
  f3.side = 1.0;
  f3.flux = 0.037;
  const double t1 = build_lattice(f3, 0, 1e-3, 3).spacing;
  const double t2 = build_lattice(f3, 0, 2e-3, 3).spacing;
  CHECK(t2 / t1 == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("cylinder_match: constant field pairs straight across the cube") {
  FieldSpec f = box_field(2, Vec{0, 0}, Vec{0.5, 0.5},
                          [](const Vec&) { return Vec{1, 0}; });
  Cube cube;
  cube.lo = Vec{0, 0};
  cube.side = 0.5;
  std::vector<std::pair<Point, int>> atoms;
  for (double y : {0.1, 0.3}) {
    atoms.emplace_back(Point{0.0, y}, -1);  // inflow face
    atoms.emplace_back(Point{0.5, y}, +1);  // outflow face
  }
  CubeMatchResult r = cylinder_match(f, cube, atoms, 1e-6);
  CHECK(r.active);
  CHECK(r.leftovers.empty());
  REQUIRE(r.good.segments.size() == 2);
  for (const auto& seg : r.good.segments) {
    CHECK(seg.a[0] == 0.0);
    CHECK(seg.b[0] == 0.5);
    CHECK(seg.a[1] == seg.b[1]);  // parallel to e1
  }
}

TEST_CASE("cylinder_match: below-threshold cube reports all atoms leftover") {
  FieldSpec f = box_field(2, Vec{0, 0}, Vec{1, 1},
                          [](const Vec&) { return Vec{1e-6, 0}; });
  Cube cube;
  cube.lo = Vec{0, 0};
  cube.side = 1.0;
  std::vector<std::pair<Point, int>> atoms{{Point{0.0, 0.5}, -1},
                                           {Point{1.0, 0.5}, +1}};
  CubeMatchResult r = cylinder_match(f, cube, atoms, 1e-3);
  CHECK(!r.active);
  CHECK(r.good.segments.empty());
  CHECK(r.leftovers.size() == 2);
}

TEST_CASE("greedy_pair: minimal examples") {
  std::vector<std::pair<Point, int>> atoms{{Point{2, 0}, 1}, {Point{0, 0}, -1}};
  SegmentCurrent out = greedy_pair(atoms, 2);
  REQUIRE(out.segments.size() == 1);
  CHECK(out.segments[0].a == Vec{0, 0});  // minus -> plus
  CHECK(out.segments[0].b == Vec{2, 0});
  CHECK(atoms.empty());

  // Imbalance 3: exactly 3 unpaired atoms remain.
  atoms = {{Point{0, 0}, 1}, {Point{1, 0}, 1}, {Point{2, 0}, 1},
           {Point{3, 0}, 1}, {Point{0, 1}, -1}};
  out = greedy_pair(atoms, 2);
  CHECK(out.segments.size() == 1);
  CHECK(atoms.size() == 3);
  for (const auto& [p, sgn] : atoms) CHECK(sgn == 1);
}

TEST_CASE("greedy_pair: nearest minus wins, lexicographic tie-break") {
  std::vector<std::pair<Point, int>> atoms{
      {Point{0, 0}, 1}, {Point{0, 1}, -1}, {Point{0, 3}, -1}};
  SegmentCurrent out = greedy_pair(atoms, 2);
  REQUIRE(out.segments.size() == 1);
  CHECK(out.segments[0].a == Vec{0, 1});
  CHECK(atoms.size() == 1);
  CHECK(atoms[0].first == Vec{0, 3});
}

TEST_CASE("approximate: zero field gives empty output") {
  FieldSpec zero = box_field(2, Vec{0, 0}, Vec{1, 1},
                             [](const Vec&) { return Vec{0, 0}; });
  ApproxParams p;
  p.eps = 0.25;
  p.delta = 1e-3;
  p.mc_samples = 10000;
  ApproxResult r = approximate(zero, p);
  CHECK(r.current.segments.empty());
  CHECK(r.loops.empty());
  CHECK(r.diag.mass_mu == 0.0);
  CHECK(r.diag.mass_psi == doctest::Approx(0.0));
}

TEST_CASE("approximate: parameter validation") {
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  ApproxParams p;
  p.eps = -0.1;
  CHECK_THROWS_AS(approximate(psi, p), std::invalid_argument);
  p = ApproxParams{};
  p.s = 1.2;
  CHECK_THROWS_AS(approximate(psi, p), std::domain_error);
  p = ApproxParams{};
  p.dim = 3;  // mismatched with the 2-D field
  CHECK_THROWS_AS(approximate(psi, p), std::invalid_argument);
}

TEST_CASE("approximate: coarse curl-bump run is closed and accurate") {
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  ApproxParams p;
  p.eps = 0.2;
  p.delta = 1e-3;
  p.rho = 1e-3;
  p.mc_samples = 100000;
  ApproxResult r = approximate(psi, p);
  CHECK(!r.current.segments.empty());
  CHECK(boundary(r.current, 0.0).empty());
  CHECK(r.diag.loops > 0);
  CHECK(static_cast<long>(r.loops.size()) == r.diag.loops);
  // Weights all equal the flux quantum.
  for (const auto& s : r.current.segments) CHECK(s.w == p.delta);
  // Mass and pairing diagnostics within the coarse-scale budget.
  CHECK(std::abs(r.diag.mass_mu - r.diag.mass_psi) / r.diag.mass_psi < 0.05);
  CHECK(r.diag.pairing_err_max < 0.10);
  CHECK(r.diag.leftovers < r.diag.atoms_total / 5);
}

TEST_CASE("approximate: deterministic across runs") {
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  ApproxParams p;
  p.eps = 0.25;
  p.delta = 2e-3;
  p.mc_samples = 20000;
  ApproxResult a = approximate(psi, p);
  ApproxResult b = approximate(psi, p);
  REQUIRE(a.current.segments.size() == b.current.segments.size());
  for (std::size_t i = 0; i < a.current.segments.size(); ++i) {
    CHECK(a.current.segments[i].a == b.current.segments[i].a);
    CHECK(a.current.segments[i].b == b.current.segments[i].b);
  }
  CHECK(a.diag.ms_mu == b.diag.ms_mu);
  CHECK(a.diag.ms_psi == b.diag.ms_psi);
}

TEST_CASE("approximate: direction fidelity in active cubes") {
  // Most good-segment length should align with the local field.
  FieldSpec psi = FieldSpec::curl_bump_2d(Vec{0, 0}, 1.0, 1.0);
  ApproxParams p;
  p.eps = 0.1;
  p.delta = 1e-4;
  p.rho = 1e-3;
  p.mc_samples = 10000;
  ApproxResult r = approximate(psi, p);
  double aligned = 0.0, total = 0.0;
  for (const auto& seg : r.current.segments) {
    const Vec mid = 0.5 * (seg.a + seg.b);
    const Vec f = psi(mid);
    if (norm(f) < 1e-3) continue;
    const double L = seg.length();
    total += L;
    if (dot(seg.tangent(), normalized(f)) > 0.9) aligned += L;
  }
  CHECK(total > 0.0);
  CHECK(aligned / total > 0.9);
}
