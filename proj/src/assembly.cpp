#include "apheat/assembly.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "apheat/quadrature.hpp"
#include "apheat/shape.hpp"

namespace apheat {

namespace {

// Shape data shared by every element of the uniform mesh.
struct ElementQuadrature {
  std::array<ShapeTable, 9> ref;  // per quadrature point
  std::array<std::array<Vec2, 9>, 9> grad;  // physical gradients [qp][basis]
  std::array<double, 9> weight;  // quadrature weight times Jacobian determinant
};

ElementQuadrature element_quadrature(const Grid& grid) {
  const auto& rule = quad_rule();
  ElementQuadrature eq;
  const double sx = 2.0 / grid.hx();
  const double sy = 2.0 / grid.hy();
  const double det = 0.25 * grid.hx() * grid.hy();
  for (int q = 0; q < 9; ++q) {
    eq.ref[q] = shape_table(rule.points[q]);
    for (int k = 0; k < 9; ++k)
      eq.grad[q][k] = {sx * eq.ref[q].grad[k].x, sy * eq.ref[q].grad[k].y};
    eq.weight[q] = rule.weights[q] * det;
  }
  return eq;
}

using Local = std::array<std::array<double, 9>, 9>;

// kernel(element, qp, x, local) accumulates the quadrature contribution.
template <class Kernel>
SparseMatrix assemble_bilinear(const Grid& grid, Kernel&& kernel) {
  const auto& rule = quad_rule();
  const int n = grid.num_dofs();
  TripletList t(n, n);
  t.reserve(static_cast<std::size_t>(grid.num_elements()) * 81);
  for (int e = 0; e < grid.num_elements(); ++e) {
    Local local{};
    for (int q = 0; q < 9; ++q) kernel(e, q, grid.map(e, rule.points[q]), local);
    const auto dofs = grid.element_dofs(e);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) t.add(dofs[i], dofs[j], local[i][j]);
  }
  return finalize(t);
}

Vec2 checked_unit(const AnisotropyField& field, Vec2 x) {
  const Vec2 b = field.unit(x);
  if (!(std::abs(norm(b) - 1.0) <= 1e-10)) {
    std::ostringstream os;
    os << "anisotropy direction is not a unit vector at (" << x.x << ", " << x.y
       << "): |b| = " << norm(b);
    throw Error(os.str());
  }
  return b;
}

double lagrange1d(int a, double s) {
  switch (a) {
    case 0: return 0.5 * s * (s - 1.0);
    case 1: return (1.0 - s) * (1.0 + s);
    default: return 0.5 * s * (s + 1.0);
  }
}

}  // namespace

ScalarField constant_field(double value) {
  return [value](Vec2) { return value; };
}

TensorField identity_tensor() {
  return [](Vec2) { return Mat2::identity(); };
}

SparseMatrix assemble_mass(const Grid& grid) {
  const auto eq = element_quadrature(grid);
  return assemble_bilinear(grid, [&](int, int q, Vec2, Local& local) {
    const auto& v = eq.ref[q].value;
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) local[i][j] += eq.weight[q] * v[i] * v[j];
  });
}

SparseMatrix assemble_stiffness(const Grid& grid) {
  const auto eq = element_quadrature(grid);
  return assemble_bilinear(grid, [&](int, int q, Vec2, Local& local) {
    const auto& g = eq.grad[q];
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) local[i][j] += eq.weight[q] * dot(g[i], g[j]);
  });
}

SparseMatrix assemble_perp(const Grid& grid, const AnisotropyField& field,
                           const TensorField& a_perp) {
  const auto eq = element_quadrature(grid);
  return assemble_bilinear(grid, [&](int, int q, Vec2 x, Local& local) {
    const Vec2 b = checked_unit(field, x);
    const Mat2 a = a_perp(x);
    std::array<Vec2, 9> pg;
    for (int k = 0; k < 9; ++k) {
      const Vec2 g = eq.grad[q][k];
      pg[k] = g - dot(b, g) * b;
    }
    for (int j = 0; j < 9; ++j) {
      const Vec2 flux = a * pg[j];
      for (int i = 0; i < 9; ++i) local[i][j] += eq.weight[q] * dot(flux, pg[i]);
    }
  });
}

SparseMatrix assemble_par(const Grid& grid, const AnisotropyField& field,
                          const ScalarField& a_par) {
  const auto eq = element_quadrature(grid);
  return assemble_bilinear(grid, [&](int, int q, Vec2 x, Local& local) {
    const Vec2 b = checked_unit(field, x);
    const double w = eq.weight[q] * a_par(x);
    std::array<double, 9> d;
    for (int k = 0; k < 9; ++k) d[k] = dot(b, eq.grad[q][k]);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) local[i][j] += w * d[i] * d[j];
  });
}

SparseMatrix assemble_par_nl(const Grid& grid, const AnisotropyField& field,
                             const ScalarField& a_par, std::span<const double> state,
                             double exponent) {
  if (static_cast<int>(state.size()) != grid.num_dofs())
    throw Error("assemble_par_nl: state has wrong length");
  const auto eq = element_quadrature(grid);
  return assemble_bilinear(grid, [&](int e, int q, Vec2 x, Local& local) {
    const auto dofs = grid.element_dofs(e);
    double psi = 0.0;
    for (int k = 0; k < 9; ++k) psi += state[dofs[k]] * eq.ref[q].value[k];
    if (!(psi > 0.0)) {
      std::ostringstream os;
      os << "nonpositive state " << psi << " at quadrature point (" << x.x << ", " << x.y
         << ")";
      throw NegativeStateError(os.str(), x, psi);
    }
    const Vec2 b = checked_unit(field, x);
    const double w = eq.weight[q] * a_par(x) * std::pow(psi, exponent);
    std::array<double, 9> d;
    for (int k = 0; k < 9; ++k) d[k] = dot(b, eq.grad[q][k]);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j) local[i][j] += w * d[i] * d[j];
  });
}

SparseMatrix assemble_robin(const Grid& grid, double gamma) {
  if (!grid.classified()) throw Error("assemble_robin: boundary is not classified");
  const auto& g = gauss3();
  const int n = grid.num_dofs();
  TripletList t(n, n);
  for (const auto& edge : grid.edges()) {
    if (edge.tag != EdgeTag::in && edge.tag != EdgeTag::out) continue;
    const double half = 0.5 * edge.length();
    for (int q = 0; q < 3; ++q) {
      const double s = g.points[q];
      const double w = gamma * g.weights[q] * half;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          t.add(edge.dofs[i], edge.dofs[j], w * lagrange1d(i, s) * lagrange1d(j, s));
    }
  }
  return finalize(t);
}

DofVector assemble_load(const Grid& grid, const SpaceTimeFn& f, double t) {
  const auto eq = element_quadrature(grid);
  const auto& rule = quad_rule();
  DofVector out(grid.num_dofs(), 0.0);
  for (int e = 0; e < grid.num_elements(); ++e) {
    const auto dofs = grid.element_dofs(e);
    for (int q = 0; q < 9; ++q) {
      const double fw = eq.weight[q] * f(t, grid.map(e, rule.points[q]));
      for (int k = 0; k < 9; ++k) out[dofs[k]] += fw * eq.ref[q].value[k];
    }
  }
  return out;
}

DofVector assemble_boundary_load(const Grid& grid, const EdgeFn& gfn) {
  const auto& g = gauss3();
  DofVector out(grid.num_dofs(), 0.0);
  for (const auto& edge : grid.edges()) {
    const double half = 0.5 * edge.length();
    for (int q = 0; q < 3; ++q) {
      const double s = g.points[q];
      const double w = g.weights[q] * half * gfn(edge, edge.point(s));
      for (int i = 0; i < 3; ++i) out[edge.dofs[i]] += w * lagrange1d(i, s);
    }
  }
  return out;
}

DofVector interpolate(const Grid& grid, const ScalarField& f) {
  DofVector out(grid.num_dofs());
  for (int d = 0; d < grid.num_dofs(); ++d) out[d] = f(grid.node(d));
  return out;
}

double evaluate(const Grid& grid, std::span<const double> uh, int element, Vec2 ref) {
  const auto dofs = grid.element_dofs(element);
  const auto tab = shape_table(ref);
  double v = 0.0;
  for (int k = 0; k < 9; ++k) v += uh[dofs[k]] * tab.value[k];
  return v;
}

double l2_norm_error(const Grid& grid, std::span<const double> uh, const SpaceTimeFn& exact,
                     double t, ErrorMode mode) {
  const auto& rule = error_rule();
  std::array<ShapeTable, 25> tab;
  for (int q = 0; q < 25; ++q) tab[q] = shape_table(rule.points[q]);
  const double det = 0.25 * grid.hx() * grid.hy();
  double err2 = 0.0, ref2 = 0.0;
  for (int e = 0; e < grid.num_elements(); ++e) {
    const auto dofs = grid.element_dofs(e);
    for (int q = 0; q < 25; ++q) {
      double v = 0.0;
      for (int k = 0; k < 9; ++k) v += uh[dofs[k]] * tab[q].value[k];
      const double u = exact(t, grid.map(e, rule.points[q]));
      const double w = rule.weights[q] * det;
      err2 += w * (v - u) * (v - u);
      ref2 += w * u * u;
    }
  }
  if (mode == ErrorMode::absolute) return std::sqrt(err2);
  if (ref2 == 0.0) throw Error("l2_norm_error: relative error against a zero exact solution");
  return std::sqrt(err2 / ref2);
}

double l2_norm(const Grid& grid, std::span<const double> uh) {
  return l2_norm_error(grid, uh, [](double, Vec2) { return 0.0; }, 0.0, ErrorMode::absolute);
}

double integral(const Grid& grid, std::span<const double> uh) {
  const auto eq = element_quadrature(grid);
  double s = 0.0;
  for (int e = 0; e < grid.num_elements(); ++e) {
    const auto dofs = grid.element_dofs(e);
    for (int q = 0; q < 9; ++q)
      for (int k = 0; k < 9; ++k) s += eq.weight[q] * uh[dofs[k]] * eq.ref[q].value[k];
  }
  return s;
}

PointValue min_at_quadrature(const Grid& grid, std::span<const double> uh) {
  const auto eq = element_quadrature(grid);
  const auto& rule = quad_rule();
  PointValue best{std::numeric_limits<double>::infinity(), {}};
  for (int e = 0; e < grid.num_elements(); ++e) {
    const auto dofs = grid.element_dofs(e);
    for (int q = 0; q < 9; ++q) {
      double v = 0.0;
      for (int k = 0; k < 9; ++k) v += uh[dofs[k]] * eq.ref[q].value[k];
      if (v < best.value) best = {v, grid.map(e, rule.points[q])};
    }
  }
  return best;
}

}  // namespace apheat
