#include "apheat/anisotropy.hpp"

#include <numbers>
#include <utility>

namespace apheat {

AnisotropyField::AnisotropyField(VectorFn raw, JacobianFn jacobian, double alpha)
    : raw_(std::move(raw)), jacobian_(std::move(jacobian)), alpha_(alpha) {}

AnisotropyField AnisotropyField::mms(double alpha) {
  using std::numbers::pi;
  auto raw = [alpha](Vec2 p) -> Vec2 {
    return {alpha * (2.0 * p.y - 1.0) * std::cos(pi * p.x) + pi,
            pi * alpha * (p.y * p.y - p.y) * std::sin(pi * p.x)};
  };
  auto jac = [alpha](Vec2 p) -> Mat2 {
    const double c = std::cos(pi * p.x);
    const double s = std::sin(pi * p.x);
    return {-pi * alpha * (2.0 * p.y - 1.0) * s, 2.0 * alpha * c,
            pi * pi * alpha * (p.y * p.y - p.y) * c, pi * alpha * (2.0 * p.y - 1.0) * s};
  };
  return AnisotropyField(raw, jac, alpha);
}

AnisotropyField AnisotropyField::constant(Vec2 direction) {
  return AnisotropyField([direction](Vec2) { return direction; },
                         [](Vec2) { return Mat2{}; });
}

Vec2 AnisotropyField::unit(Vec2 x) const {
  const Vec2 b = raw_(x);
  return (1.0 / norm(b)) * b;
}

Vec2 bfield_eval(const AnisotropyField& field, Vec2 x) { return field.unit(x); }

double divergence_check(const AnisotropyField& field, Vec2 x) {
  const Mat2 j = field.jacobian(x);
  return j.xx + j.yy;
}

}  // namespace apheat
