#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>

namespace fracmass {

// Points and directions live in R^d with 2 <= d <= kMaxDim.
inline constexpr int kMaxDim = 4;

class Vec {
public:
  Vec() = default;

  explicit Vec(int dim, double fill = 0.0) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("Vec: dimension out of range");
    v_.fill(0.0);
    for (int i = 0; i < dim_; ++i) v_[i] = fill;
  }

  Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
    if (dim_ < 1 || dim_ > kMaxDim)
      throw std::invalid_argument("Vec: dimension out of range");
    v_.fill(0.0);
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }

  int dim() const { return dim_; }
  double operator[](int i) const { return v_[i]; }
  double& operator[](int i) { return v_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double a) {
    for (int i = 0; i < dim_; ++i) v_[i] *= a;
    return *this;
  }

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double a, Vec b) { return b *= a; }
  friend Vec operator*(Vec b, double a) { return b *= a; }
  friend Vec operator/(Vec b, double a) { return b *= (1.0 / a); }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.v_[i] != b.v_[i]) return false;
    return true;
  }
  friend bool operator!=(const Vec& a, const Vec& b) { return !(a == b); }

  // Lexicographic order, used for deterministic tie-breaks.
  friend bool operator<(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.dim_; ++i) {
      if (a.v_[i] < b.v_[i]) return true;
      if (a.v_[i] > b.v_[i]) return false;
    }
    return false;
  }

  bool finite() const {
    for (int i = 0; i < dim_; ++i)
      if (!std::isfinite(v_[i])) return false;
    return true;
  }

private:
  std::array<double, kMaxDim> v_{};
  int dim_ = 0;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec normalized(const Vec& a) {
  double n = norm(a);
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return a / n;
}

}  // namespace fracmass
