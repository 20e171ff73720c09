#pragma once

#include <array>

#include "apheat/types.hpp"

namespace apheat {

/// Three-point Gauss-Legendre rule on [-1, 1]; exact for degree 5.
struct GaussRule1D {
  std::array<double, 3> points;
  std::array<double, 3> weights;
};

const GaussRule1D& gauss3();

/// Tensor-product 3x3 Gauss rule on the reference square [-1, 1]^2.
struct QuadRule {
  std::array<Vec2, 9> points;
  std::array<double, 9> weights;
};

const QuadRule& quad_rule();

/// Tensor-product 5x5 Gauss rule, exact for degree 9. Used for error norms,
/// whose integrands are not polynomial.
struct ErrorRule {
  std::array<Vec2, 25> points;
  std::array<double, 25> weights;
};

const ErrorRule& error_rule();

}  // namespace apheat
