#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace noum {

using cplx = std::complex<double>;

/// Complex 2-vector for the two-antenna MISO geometry.
struct Vec2 {
  std::array<cplx, 2> v{};

  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }

  Vec2& operator+=(const Vec2& o) {
    v[0] += o.v[0];
    v[1] += o.v[1];
    return *this;
  }

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }

inline Vec2 operator*(cplx s, const Vec2& x) { return Vec2{{s * x[0], s * x[1]}}; }

inline Vec2 operator*(double s, const Vec2& x) { return cplx(s) * x; }

/// Hermitian inner product x^H y.
inline cplx hdot(const Vec2& x, const Vec2& y) {
  return std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1];
}

inline double norm_sq(const Vec2& x) { return std::norm(x[0]) + std::norm(x[1]); }

inline double norm(const Vec2& x) { return std::sqrt(norm_sq(x)); }

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

inline double lin_to_db(double lin) {
  if (lin <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(lin);
}

}  // namespace noum
