#include "apheat/shape.hpp"

#include <string>

namespace apheat {

namespace {

// Lagrange polynomials through -1, 0, 1 and their derivatives.
double lagrange(int a, double s) {
  switch (a) {
    case 0: return 0.5 * s * (s - 1.0);
    case 1: return (1.0 - s) * (1.0 + s);
    default: return 0.5 * s * (s + 1.0);
  }
}

double lagrange_deriv(int a, double s) {
  switch (a) {
    case 0: return s - 0.5;
    case 1: return -2.0 * s;
    default: return s + 0.5;
  }
}

}  // namespace

ShapeValue shape_eval(int basis_index, Vec2 ref) {
  if (basis_index < 0 || basis_index > 8)
    throw Error("shape_eval: basis index " + std::to_string(basis_index) + " out of range");
  const int a = basis_index % 3;
  const int b = basis_index / 3;
  const double lx = lagrange(a, ref.x);
  const double ly = lagrange(b, ref.y);
  return {lx * ly, {lagrange_deriv(a, ref.x) * ly, lx * lagrange_deriv(b, ref.y)}};
}

Vec2 reference_node(int basis_index) {
  if (basis_index < 0 || basis_index > 8)
    throw Error("reference_node: basis index " + std::to_string(basis_index) + " out of range");
  return {static_cast<double>(basis_index % 3 - 1), static_cast<double>(basis_index / 3 - 1)};
}

ShapeTable shape_table(Vec2 ref) {
  ShapeTable t;
  std::array<double, 3> lx, ly, dx, dy;
  for (int a = 0; a < 3; ++a) {
    lx[a] = lagrange(a, ref.x);
    ly[a] = lagrange(a, ref.y);
    dx[a] = lagrange_deriv(a, ref.x);
    dy[a] = lagrange_deriv(a, ref.y);
  }
  for (int k = 0; k < 9; ++k) {
    const int a = k % 3, b = k / 3;
    t.value[k] = lx[a] * ly[b];
    t.grad[k] = {dx[a] * ly[b], lx[a] * dy[b]};
  }
  return t;
}

}  // namespace apheat
