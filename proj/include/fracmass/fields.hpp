#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "fracmass/vec.hpp"

namespace fracmass {

struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return lo.dim(); }
  double side(int i) const { return hi[i] - lo[i]; }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= side(i);
    return v;
  }
  bool contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
};

// Analytic compactly supported divergence-free field.
// 2-D presets are perpendicular gradients of a C^inf bump, 3-D presets
// curls of a bump potential, so div psi = 0 holds exactly.
class FieldSpec {
public:
  enum class Kind { CurlBump2d, CurlBump3d, Custom };

  static FieldSpec curl_bump_2d(const Vec& center, double radius,
                                double amplitude);
  static FieldSpec curl_bump_3d(const Vec& center, double radius,
                                double amplitude);
  static FieldSpec custom(int dim, Box support,
                          std::function<Vec(const Vec&)> eval);

  Vec operator()(const Vec& x) const { return eval_(x); }
  int dim() const { return dim_; }
  const Box& support_box() const { return support_; }
  Kind kind() const { return kind_; }

  // L1 norm of |psi| over the support box by tensor quadrature.
  double l1_norm(int nodes_per_axis = 200) const;

private:
  FieldSpec() = default;
  Kind kind_ = Kind::Custom;
  int dim_ = 0;
  Box support_;
  std::function<Vec(const Vec&)> eval_;
};

FieldSpec make_field_preset(const std::string& name, const Vec& center,
                            double radius, double amplitude);

// Monte-Carlo estimate of the field-field Riesz energy
// int int psi(x).psi(y) |x-y|^{-s} dx dy over the support box.
// Returns (estimate, stderr); deterministic for a fixed seed.
std::pair<double, double> field_riesz_energy(const FieldSpec& psi, double s,
                                             long n_samples,
                                             std::uint64_t seed);

}  // namespace fracmass
