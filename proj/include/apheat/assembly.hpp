#pragma once

#include <functional>
#include <span>

#include "apheat/anisotropy.hpp"
#include "apheat/grid.hpp"
#include "apheat/sparse.hpp"

namespace apheat {

using ScalarField = std::function<double(Vec2)>;
using TensorField = std::function<Mat2(Vec2)>;
using SpaceTimeFn = std::function<double(double, Vec2)>;
/// Boundary data evaluated at a point of a classified edge.
using EdgeFn = std::function<double(const BoundaryEdge&, Vec2)>;

ScalarField constant_field(double value);
TensorField identity_tensor();

/// (theta_i, theta_j) over the unit square.
SparseMatrix assemble_mass(const Grid& grid);

/// int grad theta_i . grad theta_j; reference for the directional split.
SparseMatrix assemble_stiffness(const Grid& grid);

/// int A_perp grad_perp theta_j . grad_perp theta_i with
/// grad_perp = (Id - b b^T) grad. Throws when |b| deviates from 1 by > 1e-10.
SparseMatrix assemble_perp(const Grid& grid, const AnisotropyField& field,
                           const TensorField& a_perp);

/// int A_par (b . grad theta_j)(b . grad theta_i).
SparseMatrix assemble_par(const Grid& grid, const AnisotropyField& field,
                          const ScalarField& a_par);

/// int A_par psi^exponent (b . grad theta_j)(b . grad theta_i), where psi is
/// the Q2 interpolant of `state` evaluated at each quadrature point. Throws
/// NegativeStateError with the offending location when psi <= 0.
SparseMatrix assemble_par_nl(const Grid& grid, const AnisotropyField& field,
                             const ScalarField& a_par, std::span<const double> state,
                             double exponent);

/// gamma times the boundary mass matrix over in/out edges (3-point Gauss per edge).
SparseMatrix assemble_robin(const Grid& grid, double gamma);

/// Entries int f(t, .) theta_i.
DofVector assemble_load(const Grid& grid, const SpaceTimeFn& f, double t);

/// Entries int_{boundary} g theta_i ds over all boundary edges.
DofVector assemble_boundary_load(const Grid& grid, const EdgeFn& g);

/// Nodal interpolant of a space function.
DofVector interpolate(const Grid& grid, const ScalarField& f);

/// Value of a Q2 field at reference coordinates of an element.
double evaluate(const Grid& grid, std::span<const double> uh, int element, Vec2 ref);

enum class ErrorMode { absolute, relative };

/// L2 distance between uh and exact(t, .) by the 5x5 error rule.
double l2_norm_error(const Grid& grid, std::span<const double> uh, const SpaceTimeFn& exact,
                     double t, ErrorMode mode);

double l2_norm(const Grid& grid, std::span<const double> uh);
double integral(const Grid& grid, std::span<const double> uh);

struct PointValue {
  double value;
  Vec2 location;
};

/// Smallest value of the Q2 field over all quadrature points.
PointValue min_at_quadrature(const Grid& grid, std::span<const double> uh);

}  // namespace apheat
