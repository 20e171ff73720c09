#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace apheat {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

/// Row-major 2x2 matrix.
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  Vec2 operator*(Vec2 v) const { return {xx * v.x + xy * v.y, yx * v.x + yy * v.y}; }
};

/// Coefficient vector of a finite element field. Entries are indexed by
/// global lattice DOF for u-type fields and by the restricted numbering for
/// q-type fields (inflow DOFs removed).
using DofVector = std::vector<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a field that enters a fractional power is nonpositive.
class NegativeStateError : public Error {
 public:
  NegativeStateError(const std::string& what, Vec2 where, double value)
      : Error(what), location(where), value(value) {}

  Vec2 location;
  double value;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, long pivot)
      : Error(what), pivot(pivot) {}

  long pivot;  // -1 when the backend does not report it
};

}  // namespace apheat
