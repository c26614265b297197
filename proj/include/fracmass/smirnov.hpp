#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fracmass/fields.hpp"
#include "fracmass/geometry.hpp"

namespace fracmass {

struct ApproxParams {
  double eps = 0.1;    // cube side
  double delta = 1e-4; // flux quantum
  double rho = 1e-3;   // low-field threshold
  int dim = 2;
  std::uint64_t seed = 0;
  int face_quad_order = 8;
  double s = 0.5;             // exponent for the energy diagnostics
  long mc_samples = 2000000;  // for the MC energies in Diagnostics
  long exact_mass_cutoff = 1500;  // segment count above which M_s goes MC

  void validate() const;
};

struct Cube {
  Vec lo;
  double side = 0.0;
  std::array<int, 3> idx{0, 0, 0};

  Vec center(int d) const;
};

// Oriented face of the cover grid: normal axis + plane/cross indices.
// Flux is stored with the global +e_axis normal.
struct Face {
  int axis = 0;
  std::array<int, 3> idx{0, 0, 0};  // idx[axis] = plane index
  Vec lo;                            // min corner of the face
  double side = 0.0;
  double flux = 0.0;
};

struct FaceLattice {
  std::size_t face_id = 0;
  double spacing = 0.0;
  int sign = 0;  // +1 / -1 with the face's global normal; 0 = empty
  std::vector<Point> points;
};

struct Diagnostics {
  double mass_mu = 0.0;   // |mu|(R^d)
  double mass_psi = 0.0;  // ||psi||_{L^1}
  double pairing_err_max = 0.0;  // max relative weak-star pairing error
  std::vector<double> pairing_errs;
  double ms_mu = 0.0, ms_mu_stderr = 0.0;
  double ms_psi = 0.0, ms_psi_stderr = 0.0;
  long cubes_total = 0, cubes_active = 0;
  long atoms_total = 0, leftovers = 0, unpaired_after_boundary = 0;
  long segments_good = 0, segments_boundary = 0, segments_closing = 0;
  long loops = 0;
};

std::vector<Cube> cube_cover(const FieldSpec& psi, double eps);

// All grid faces with their fluxes; shared faces appear once, so the
// discrete divergence of the flux field is exactly zero.
std::vector<Face> face_fluxes(const FieldSpec& psi,
                              const std::vector<Cube>& cubes, double eps,
                              int quad_order);

FaceLattice build_lattice(const Face& face, std::size_t face_id, double delta,
                          int dim);

struct CubeMatchResult {
  SegmentCurrent good;                       // mu^g of the cube
  std::vector<std::pair<Point, int>> leftovers;  // unpaired atoms, sign
  bool active = false;                       // passed the rho threshold
};

// Atoms carry the cube-local sign: +1 where flux leaves the cube
// (segment heads), -1 where it enters (segment tails).
CubeMatchResult cylinder_match(const FieldSpec& psi, const Cube& cube,
                               const std::vector<std::pair<Point, int>>& atoms,
                               double rho);

// Greedy nearest-neighbor pairing (deterministic); emits - -> + segments
// and returns the still-unpaired atoms.
SegmentCurrent greedy_pair(std::vector<std::pair<Point, int>>& atoms, int dim);

// Full pipeline. Returns the closed current (weights delta), its loop
// decomposition, and diagnostics.
struct ApproxResult {
  SegmentCurrent current;
  std::vector<PolyCurve> loops;
  Diagnostics diag;
};

ApproxResult approximate(const FieldSpec& psi, const ApproxParams& p);

}  // namespace fracmass
