#pragma once

#include <array>
#include <vector>

#include "apheat/anisotropy.hpp"
#include "apheat/types.hpp"

namespace apheat {

enum class EdgeTag { unclassified, in, out, parallel };
enum class Side { bottom, right, top, left };

const char* to_string(EdgeTag tag);

struct BoundaryEdge {
  Side side;
  int element;
  std::array<int, 3> dofs;  // start, midpoint, end along the edge
  Vec2 start;
  Vec2 end;
  Vec2 normal;  // outward unit normal
  EdgeTag tag = EdgeTag::unclassified;

  double length() const { return norm(end - start); }
  Vec2 point(double s) const;  // s in [-1, 1]
};

/// Uniform Cartesian Q2 mesh of the unit square. Elements are nx by ny
/// rectangles of size hx by hy; nodes sit on the (2 nx + 1) x (2 ny + 1)
/// lattice, numbered row-major (x fastest).
class Grid {
 public:
  Grid(int nx, int ny);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return hx_; }
  double hy() const { return hy_; }
  /// Spacing between neighbouring lattice nodes along x (hx / 2).
  double lattice_spacing() const { return 0.5 * hx_; }

  int lattice_nx() const { return 2 * nx_ + 1; }
  int lattice_ny() const { return 2 * ny_ + 1; }
  int num_dofs() const { return lattice_nx() * lattice_ny(); }
  int num_elements() const { return nx_ * ny_; }

  int dof(int i, int j) const { return j * lattice_nx() + i; }
  Vec2 node(int dof) const;
  std::array<int, 9> element_dofs(int element) const;
  /// Lower-left corner of an element.
  Vec2 element_origin(int element) const;
  /// Physical point of reference coordinates inside an element.
  Vec2 map(int element, Vec2 ref) const;

  const std::vector<BoundaryEdge>& edges() const { return edges_; }
  std::vector<BoundaryEdge>& edges() { return edges_; }
  bool classified() const;

  /// Lattice DOFs lying on an inflow edge (endpoints included).
  std::vector<bool> inflow_mask() const;

 private:
  int nx_, ny_;
  double hx_, hy_;
  std::vector<BoundaryEdge> edges_;
};

/// Grid with nx by ny Q2 elements. Counts must be even and at least 2.
Grid build_grid(int nx, int ny);

/// Grid described by the number of lattice intervals per axis, i.e. a node
/// spacing of 1/intervals and intervals/2 elements per axis, which may be
/// odd. Interval counts must be even and at least 2.
Grid grid_from_lattice(int intervals_x, int intervals_y);

/// Tags each boundary edge by the sign of b.n at its midpoint.
/// Throws when b.n changes sign between the edge's quadrature points.
Grid classify_boundary(Grid grid, const AnisotropyField& field, double tol = 1e-12);

}  // namespace apheat
