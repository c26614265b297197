#pragma once

#include <vector>

namespace fracmass {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes via Newton iteration on Legendre polynomials; cached per order.
const GaussRule& gauss_legendre(int order);

// Integrate f over [a, b] with a single Gauss rule.
template <typename F>
double gauss_integrate(F&& f, double a, double b, int order) {
  const GaussRule& r = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k)
    s += r.weights[k] * f(mid + half * r.nodes[k]);
  return s * half;
}

// Integrate f over [0, L] with panels graded geometrically toward 0.
// Handles integrable endpoint singularities like t^{-s}, s < 1.
template <typename F>
double graded_integrate(F&& f, double L, int depth, int order) {
  double s = 0.0;
  double hi = L;
  for (int k = 0; k < depth; ++k) {
    double lo = hi * 0.5;
    s += gauss_integrate(f, lo, hi, order);
    hi = lo;
  }
  // Last sliver [0, L/2^depth]: one more panel; its contribution is
  // O((L 2^-depth)^{1-s}) and covered by the depth choice.
  s += gauss_integrate(f, 0.0, hi, order);
  return s;
}

}  // namespace fracmass
