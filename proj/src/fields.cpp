#include "fracmass/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "fracmass/quadrature.hpp"
#include "fracmass/rng.hpp"

namespace fracmass {

namespace {

// C^inf bump profile f(t) = exp(-1/(1-t)) for t < 1, 0 otherwise,
// with t = |x-c|^2 / R^2; f'(t) = -f(t)/(1-t)^2.
double bump(double t) { return t < 1.0 ? std::exp(-1.0 / (1.0 - t)) : 0.0; }
double bump_deriv(double t) {
  if (t >= 1.0) return 0.0;
  double om = 1.0 - t;
  return -bump(t) / (om * om);
}

Box ball_box(const Vec& c, double R) {
  Vec lo = c, hi = c;
  for (int i = 0; i < c.dim(); ++i) {
    lo[i] -= R;
    hi[i] += R;
  }
  return Box{lo, hi};
}

}  // namespace

FieldSpec FieldSpec::curl_bump_2d(const Vec& center, double radius,
                                  double amplitude) {
  if (center.dim() != 2 || radius <= 0.0)
    throw std::invalid_argument("curl_bump_2d: need 2-D center, radius > 0");
  FieldSpec f;
  f.kind_ = Kind::CurlBump2d;
  f.dim_ = 2;
  f.support_ = ball_box(center, radius);
  const double R2 = radius * radius;
  f.eval_ = [center, R2, amplitude](const Vec& x) -> Vec {
    Vec r = x - center;
    double t = norm2(r) / R2;
    double g = amplitude * bump_deriv(t) * 2.0 / R2;
    // psi = grad^perp phi = (-d2 phi, d1 phi)
    return Vec{-g * r[1], g * r[0]};
  };
  return f;
}

FieldSpec FieldSpec::curl_bump_3d(const Vec& center, double radius,
                                  double amplitude) {
  if (center.dim() != 3 || radius <= 0.0)
    throw std::invalid_argument("curl_bump_3d: need 3-D center, radius > 0");
  FieldSpec f;
  f.kind_ = Kind::CurlBump3d;
  f.dim_ = 3;
  f.support_ = ball_box(center, radius);
  const double R2 = radius * radius;
  // Vector potential A = (0, 0, phi); psi = curl A = (d2 phi, -d1 phi, 0).
  f.eval_ = [center, R2, amplitude](const Vec& x) -> Vec {
    Vec r = x - center;
    double t = norm2(r) / R2;
    double g = amplitude * bump_deriv(t) * 2.0 / R2;
    return Vec{g * r[1], -g * r[0], 0.0};
  };
  return f;
}

FieldSpec FieldSpec::custom(int dim, Box support,
                            std::function<Vec(const Vec&)> eval) {
  FieldSpec f;
  f.kind_ = Kind::Custom;
  f.dim_ = dim;
  f.support_ = support;
  f.eval_ = std::move(eval);
  return f;
}

double FieldSpec::l1_norm(int nodes_per_axis) const {
  const GaussRule& r = gauss_legendre(16);
  const int panels = std::max(1, nodes_per_axis / 16);
  // Composite Gauss per axis over the support box.
  auto axis_nodes = [&](int ax, std::vector<double>& xs,
                        std::vector<double>& ws) {
    double a = support_.lo[ax], h = support_.side(ax) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        xs.push_back(a + h * (p + 0.5 * (1.0 + r.nodes[k])));
        ws.push_back(0.5 * h * r.weights[k]);
      }
  };
  std::vector<double> xs, wxs, ys, wys, zs, wzs;
  axis_nodes(0, xs, wxs);
  axis_nodes(1, ys, wys);
  if (dim_ == 3) axis_nodes(2, zs, wzs);
  double sum = 0.0;
  if (dim_ == 2) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j)
        sum += wxs[i] * wys[j] * norm(eval_(Vec{xs[i], ys[j]}));
  } else {
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j)
        for (std::size_t k = 0; k < zs.size(); ++k)
          sum += wxs[i] * wys[j] * wzs[k] * norm(eval_(Vec{xs[i], ys[j], zs[k]}));
  }
  return sum;
}

FieldSpec make_field_preset(const std::string& name, const Vec& center,
                            double radius, double amplitude) {
  if (name == "curl_bump_2d")
    return FieldSpec::curl_bump_2d(center, radius, amplitude);
  if (name == "curl_bump_3d")
    return FieldSpec::curl_bump_3d(center, radius, amplitude);
  throw std::invalid_argument("unknown field preset: " + name);
}

std::pair<double, double> field_riesz_energy(const FieldSpec& psi, double s,
                                             long n_samples,
                                             std::uint64_t seed) {
  if (n_samples < 1000)
    throw std::invalid_argument("field_riesz_energy: n_samples >= 1000 required");
  if (!(s > 0.0 && s < psi.dim()))
    throw std::domain_error("field_riesz_energy: s out of range");
  const Box& B = psi.support_box();
  const int d = psi.dim();
  const double V = B.volume();
  Rng rng(seed);
  auto sample_point = [&]() {
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(B.lo[i], B.hi[i]);
    return x;
  };
  double mean = 0.0, m2 = 0.0;
  for (long k = 1; k <= n_samples; ++k) {
    Vec x = sample_point(), y = sample_point();
    double r = dist(x, y);
    double f = r > 0.0 ? dot(psi(x), psi(y)) * std::pow(r, -s) : 0.0;
    double dlt = f - mean;
    mean += dlt / k;
    m2 += dlt * (f - mean);
  }
  double var = m2 / (n_samples - 1);
  return {V * V * mean, V * V * std::sqrt(var / n_samples)};
}

}  // namespace fracmass
