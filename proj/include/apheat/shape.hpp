#pragma once

#include "apheat/types.hpp"

namespace apheat {

struct ShapeValue {
  double value;
  Vec2 grad;  // with respect to reference coordinates
};

/// Biquadratic Lagrange basis on [-1, 1]^2. Local index k = a + 3 b where
/// a, b in {0, 1, 2} select the reference node (-1, 0, 1) along xi and eta.
ShapeValue shape_eval(int basis_index, Vec2 ref);

/// Reference coordinates of local node k.
Vec2 reference_node(int basis_index);

/// Values and reference gradients of all nine basis functions at a point.
struct ShapeTable {
  std::array<double, 9> value;
  std::array<Vec2, 9> grad;
};

ShapeTable shape_table(Vec2 ref);

}  // namespace apheat
