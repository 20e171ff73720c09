#include "apheat/grid.hpp"

#include <string>

#include "apheat/quadrature.hpp"

namespace apheat {

const char* to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::in: return "in";
    case EdgeTag::out: return "out";
    case EdgeTag::parallel: return "parallel";
    default: return "unclassified";
  }
}

Vec2 BoundaryEdge::point(double s) const {
  return start + (0.5 * (s + 1.0)) * (end - start);
}

Grid::Grid(int nx, int ny) : nx_(nx), ny_(ny), hx_(1.0 / nx), hy_(1.0 / ny) {
  if (nx < 1 || ny < 1) throw Error("Grid: element counts must be positive");
  const int lx = lattice_nx();
  const int ly = lattice_ny();
  edges_.reserve(2 * (nx + ny));
  for (int e = 0; e < nx; ++e) {
    const int i = 2 * e;
    edges_.push_back({Side::bottom, e, {dof(i, 0), dof(i + 1, 0), dof(i + 2, 0)},
                      {e * hx_, 0.0}, {(e + 1) * hx_, 0.0}, {0.0, -1.0}});
    edges_.push_back({Side::top, (ny - 1) * nx + e,
                      {dof(i, ly - 1), dof(i + 1, ly - 1), dof(i + 2, ly - 1)},
                      {e * hx_, 1.0}, {(e + 1) * hx_, 1.0}, {0.0, 1.0}});
  }
  for (int e = 0; e < ny; ++e) {
    const int j = 2 * e;
    edges_.push_back({Side::left, e * nx, {dof(0, j), dof(0, j + 1), dof(0, j + 2)},
                      {0.0, e * hy_}, {0.0, (e + 1) * hy_}, {-1.0, 0.0}});
    edges_.push_back({Side::right, e * nx + nx - 1,
                      {dof(lx - 1, j), dof(lx - 1, j + 1), dof(lx - 1, j + 2)},
                      {1.0, e * hy_}, {1.0, (e + 1) * hy_}, {1.0, 0.0}});
  }
}

Vec2 Grid::node(int d) const {
  const int i = d % lattice_nx();
  const int j = d / lattice_nx();
  return {0.5 * hx_ * i, 0.5 * hy_ * j};
}

std::array<int, 9> Grid::element_dofs(int element) const {
  const int ex = element % nx_;
  const int ey = element / nx_;
  std::array<int, 9> d{};
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) d[a + 3 * b] = dof(2 * ex + a, 2 * ey + b);
  return d;
}

Vec2 Grid::element_origin(int element) const {
  return {(element % nx_) * hx_, (element / nx_) * hy_};
}

Vec2 Grid::map(int element, Vec2 ref) const {
  const Vec2 o = element_origin(element);
  return {o.x + 0.5 * hx_ * (ref.x + 1.0), o.y + 0.5 * hy_ * (ref.y + 1.0)};
}

bool Grid::classified() const {
  for (const auto& e : edges_)
    if (e.tag == EdgeTag::unclassified) return false;
  return true;
}

std::vector<bool> Grid::inflow_mask() const {
  std::vector<bool> mask(num_dofs(), false);
  for (const auto& e : edges_)
    if (e.tag == EdgeTag::in)
      for (int d : e.dofs) mask[d] = true;
  return mask;
}

Grid build_grid(int nx, int ny) {
  if (nx < 2 || ny < 2 || nx % 2 != 0 || ny % 2 != 0)
    throw Error("build_grid: element counts must be even and >= 2, got " + std::to_string(nx) +
                "x" + std::to_string(ny));
  return Grid(nx, ny);
}

Grid grid_from_lattice(int intervals_x, int intervals_y) {
  if (intervals_x < 2 || intervals_y < 2 || intervals_x % 2 != 0 || intervals_y % 2 != 0)
    throw Error("grid_from_lattice: interval counts must be even and >= 2, got " +
                std::to_string(intervals_x) + "x" + std::to_string(intervals_y));
  return Grid(intervals_x / 2, intervals_y / 2);
}

Grid classify_boundary(Grid grid, const AnisotropyField& field, double tol) {
  const auto& g = gauss3();
  for (auto& edge : grid.edges()) {
    bool neg = false, pos = false;
    for (double s : g.points) {
      const double bn = dot(field.unit(edge.point(s)), edge.normal);
      neg = neg || bn < -tol;
      pos = pos || bn > tol;
    }
    if (neg && pos) {
      const Vec2 m = edge.point(0.0);
      throw Error("classify_boundary: b.n changes sign on the edge at (" +
                  std::to_string(m.x) + ", " + std::to_string(m.y) +
                  "); refine the mesh");
    }
    const double bn = dot(field.unit(edge.point(0.0)), edge.normal);
    edge.tag = bn < -tol ? EdgeTag::in : (bn > tol ? EdgeTag::out : EdgeTag::parallel);
  }
  return grid;
}

}  // namespace apheat
