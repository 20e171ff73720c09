#include "apheat/mms.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace apheat {

using std::numbers::pi;

void MmsParams::validate() const {
  if (!(eps > 0.0)) throw Error("MmsParams: eps must be positive");
  if (!(tm > 0.0)) throw Error("MmsParams: tm must be positive");
  if (gamma < 0.0) throw Error("MmsParams: gamma must be nonnegative");
}

ExactSolution::ExactSolution(MmsParams params)
    : params_(params), field_(AnisotropyField::mms(params.alpha)) {
  params_.validate();
}

Jet ExactSolution::p(double t, Vec2 x) const {
  const double a = params_.alpha;
  const double T = params_.tm * std::exp(-t);
  const double cx = std::cos(pi * x.x), sx = std::sin(pi * x.x);
  const double w = x.y * x.y - x.y;

  const double phi = pi * x.y + a * w * cx;
  const double phx = -pi * a * w * sx;
  const double phy = pi + a * (2.0 * x.y - 1.0) * cx;
  const double phxx = -pi * pi * a * w * cx;
  const double phxy = -pi * a * (2.0 * x.y - 1.0) * sx;
  const double phyy = 2.0 * a * cx;
  const double c = std::cos(phi), s = std::sin(phi);

  Jet j;
  j.v = (c + 4.0) * T;
  j.x = -s * phx * T;
  j.y = -s * phy * T;
  j.xx = (-c * phx * phx - s * phxx) * T;
  j.xy = (-c * phx * phy - s * phxy) * T;
  j.yy = (-c * phy * phy - s * phyy) * T;
  j.t = -j.v;
  return j;
}

Jet ExactSolution::q(double t, Vec2 x) const {
  const Jet pj = p(t, x);
  const double r = std::pow(pj.v, -1.5);
  const double r1 = -1.5 * std::pow(pj.v, -2.5);
  const double r2 = 3.75 * std::pow(pj.v, -3.5);
  const double rx = r1 * pj.x, ry = r1 * pj.y;
  const double rxx = r2 * pj.x * pj.x + r1 * pj.xx;
  const double rxy = r2 * pj.x * pj.y + r1 * pj.xy;
  const double ryy = r2 * pj.y * pj.y + r1 * pj.yy;

  const double S = std::sin(3.0 * pi * x.x) / (3.0 * pi);
  const double S1 = std::cos(3.0 * pi * x.x);
  const double S2 = -3.0 * pi * std::sin(3.0 * pi * x.x);

  Jet j;
  j.v = r * S;
  j.x = rx * S + r * S1;
  j.y = ry * S;
  j.xx = rxx * S + 2.0 * rx * S1 + r * S2;
  j.xy = rxy * S + ry * S1;
  j.yy = ryy * S;
  j.t = 1.5 * j.v;
  return j;
}

Jet ExactSolution::u(double t, Vec2 x) const {
  const Jet a = p(t, x), b = q(t, x);
  const double e = params_.eps;
  return {a.v + e * b.v,   a.x + e * b.x,   a.y + e * b.y, a.xx + e * b.xx,
          a.xy + e * b.xy, a.yy + e * b.yy, a.t + e * b.t};
}

double ExactSolution::scaled_parallel_derivative(double t, Vec2 x) const {
  return dot(field_.unit(x), q(t, x).grad());
}

Vec2 ExactSolution::flux(double t, Vec2 x) const {
  const Jet uj = u(t, x);
  if (!(uj.v > 0.0)) throw NegativeStateError("exact solution is nonpositive", x, uj.v);
  const Vec2 b = field_.unit(x);
  const double g = scaled_parallel_derivative(t, x);
  const double um = std::pow(uj.v, params_.exponent);
  return (params_.a_par * um * g) * b + params_.a_perp * (uj.grad() - (params_.eps * g) * b);
}

double ExactSolution::forcing(double t, Vec2 x) const {
  const Jet uj = u(t, x);
  if (!(uj.v > 0.0)) {
    std::ostringstream os;
    os << "forcing: exact solution " << uj.v << " is nonpositive at (" << x.x << ", " << x.y
       << ")";
    throw NegativeStateError(os.str(), x, uj.v);
  }
  const Jet qj = q(t, x);
  const Vec2 B = field_.raw(x);
  const Mat2 J = field_.jacobian(x);
  const double nB = norm(B);
  const Vec2 b = (1.0 / nB) * B;

  // Derivatives of b = B / |B| along x and y.
  const Vec2 dBx{J.xx, J.yx};
  const Vec2 dBy{J.xy, J.yy};
  const double nB3 = nB * nB * nB;
  const Vec2 dbx = (1.0 / nB) * dBx - (dot(B, dBx) / nB3) * B;
  const Vec2 dby = (1.0 / nB) * dBy - (dot(B, dBy) / nB3) * B;
  const double div_b = dbx.x + dby.y;

  const Vec2 gq = qj.grad();
  const double g = dot(b, gq);
  const Vec2 grad_g{dot(dbx, gq) + b.x * qj.xx + b.y * qj.xy,
                    dot(dby, gq) + b.x * qj.xy + b.y * qj.yy};
  const double b_grad_g = dot(b, grad_g);

  const double m = params_.exponent;
  const double eps = params_.eps;
  const double um = std::pow(uj.v, m);
  const double um1 = std::pow(uj.v, m - 1.0);

  const double parallel = m * um1 * eps * g * g + um * (b_grad_g + g * div_b);
  const double perpendicular = uj.laplacian() - eps * (b_grad_g + g * div_b);
  return uj.t - params_.a_par * parallel - params_.a_perp * perpendicular;
}

double ExactSolution::boundary_residual(double t, Vec2 x, Vec2 normal, EdgeTag which) const {
  const double fn = dot(flux(t, x), normal);
  if (which == EdgeTag::in || which == EdgeTag::out) return fn + params_.gamma * u(t, x).v;
  return fn;
}

double exact_u(const MmsParams& params, double t, Vec2 x) {
  return ExactSolution(params).u(t, x).v;
}

double forcing(const MmsParams& params, double t, Vec2 x) {
  return ExactSolution(params).forcing(t, x);
}

double limit_constancy_check(const MmsParams& params, double t, int samples,
                             std::uint64_t seed) {
  const ExactSolution ex(params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec2 x{unif(rng), unif(rng)};
    const Vec2 gp = ex.p(t, x).grad();
    worst = std::max(worst, std::abs(dot(ex.field().unit(x), gp)));
    scale = std::max(scale, norm(gp));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double boundary_residual(const MmsParams& params, double t, Vec2 x, Vec2 normal,
                         EdgeTag which) {
  return ExactSolution(params).boundary_residual(t, x, normal, which);
}

double gaussian_initial(double tm, Vec2 x) {
  const double dx = x.x - 0.5, dy = x.y - 0.5;
  return 0.5 * tm * (1.0 + std::exp(-50.0 * dx * dx - 50.0 * dy * dy));
}

}  // namespace apheat
