#pragma once

#include <functional>

#include "apheat/types.hpp"

namespace apheat {

/// Direction of strong diffusion. Stores the raw field B and its Jacobian;
/// the unit direction b = B / |B| is derived on evaluation.
class AnisotropyField {
 public:
  using VectorFn = std::function<Vec2(Vec2)>;
  using JacobianFn = std::function<Mat2(Vec2)>;

  AnisotropyField(VectorFn raw, JacobianFn jacobian, double alpha = 0.0);

  /// Divergence-free field B = (alpha (2y-1) cos(pi x) + pi,
  /// pi alpha (y^2 - y) sin(pi x)) used by the manufactured solution.
  static AnisotropyField mms(double alpha);
  static AnisotropyField constant(Vec2 direction);

  double alpha() const { return alpha_; }
  Vec2 raw(Vec2 x) const { return raw_(x); }
  /// J(i, j) = dB_i / dx_j.
  Mat2 jacobian(Vec2 x) const { return jacobian_(x); }
  Vec2 unit(Vec2 x) const;

 private:
  VectorFn raw_;
  JacobianFn jacobian_;
  double alpha_;
};

/// Normalized B at a point.
Vec2 bfield_eval(const AnisotropyField& field, Vec2 x);

/// dB_x/dx + dB_y/dy from the closed-form Jacobian.
double divergence_check(const AnisotropyField& field, Vec2 x);

}  // namespace apheat
