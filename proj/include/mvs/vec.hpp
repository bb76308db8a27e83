#pragma once

#include <cmath>

namespace mvs {

/// Two-component vector. One-dimensional problems use only `x`; `y` stays 0.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  constexpr double operator[](int axis) const { return axis == 0 ? x : y; }
  constexpr double& operator[](int axis) { return axis == 0 ? x : y; }

  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator/(const Vec2& a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
constexpr double norm2(const Vec2& a) { return dot(a, a); }

/// Row-major 2x2 matrix, used for `hu ⊗ u` type quantities.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  constexpr Mat2& operator+=(const Mat2& o) {
    xx += o.xx;
    xy += o.xy;
    yx += o.yx;
    yy += o.yy;
    return *this;
  }
  constexpr Mat2& operator*=(double s) {
    xx *= s;
    xy *= s;
    yx *= s;
    yy *= s;
    return *this;
  }
  constexpr double trace() const { return xx + yy; }

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
constexpr Mat2 operator*(double s, Mat2 a) { return a *= s; }

constexpr Mat2 outer(const Vec2& a, const Vec2& b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

/// Frobenius product A : B.
constexpr double contract(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

}  // namespace mvs
