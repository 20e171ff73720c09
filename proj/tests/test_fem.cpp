#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "apheat/assembly.hpp"
#include "apheat/grid.hpp"
#include "apheat/quadrature.hpp"
#include "apheat/shape.hpp"
#include "doctest.h"

using namespace apheat;

namespace {

constexpr double kPi = 3.14159265358979323846;

double total(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v;
  return s;
}

double quadratic_form(const SparseMatrix& a, const DofVector& u) {
  const auto au = a.multiply(u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * au[i];
  return s;
}

Grid classified(int nx, int ny, const AnisotropyField& f) {
  return classify_boundary(build_grid(nx, ny), f);
}

}  // namespace

TEST_CASE("gauss rule integrates monomials up to degree 5 per axis") {
  const auto& rule = quad_rule();
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(4.0).epsilon(1e-15));
  auto exact1d = [](int a) { return a % 2 ? 0.0 : 2.0 / (a + 1); };
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; b <= 5; ++b) {
      double s = 0.0;
      for (int q = 0; q < 9; ++q)
        s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
      CHECK(std::abs(s - exact1d(a) * exact1d(b)) < 1e-13);
    }
}

TEST_CASE("error rule integrates degree 9 exactly") {
  const auto& rule = error_rule();
  for (int a = 0; a <= 9; ++a) {
    double s = 0.0;
    for (int q = 0; q < 25; ++q) s += rule.weights[q] * std::pow(rule.points[q].x, a);
    CHECK(std::abs(s - (a % 2 ? 0.0 : 2.0 * 2.0 / (a + 1))) < 1e-13);
  }
}

TEST_CASE("shape functions are Lagrange and sum to one") {
  for (int k = 0; k < 9; ++k)
    for (int l = 0; l < 9; ++l)
      CHECK(shape_eval(k, reference_node(l)).value == doctest::Approx(k == l ? 1.0 : 0.0));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const Vec2 p{d(rng), d(rng)};
    const auto t = shape_table(p);
    double s = 0.0, gx = 0.0, gy = 0.0;
    for (int k = 0; k < 9; ++k) {
      s += t.value[k];
      gx += t.grad[k].x;
      gy += t.grad[k].y;
    }
    CHECK(std::abs(s - 1.0) < 1e-13);
    CHECK(std::abs(gx) < 1e-12);
    CHECK(std::abs(gy) < 1e-12);
  }
  CHECK_THROWS_AS(shape_eval(9, {0, 0}), Error);
}

TEST_CASE("edge midpoint basis has zero tangential slope at its node") {
  // Node (0, -1) is local index 1: midpoint of the bottom edge.
  const auto v = shape_eval(1, {0.0, -1.0});
  CHECK(v.value == doctest::Approx(1.0));
  CHECK(std::abs(v.grad.x) < 1e-15);
}

TEST_CASE("shape gradients match finite differences") {
  const double h = 1e-6;
  for (int k = 0; k < 9; ++k) {
    const Vec2 p{0.3, -0.7};
    const auto g = shape_eval(k, p).grad;
    const double fx =
        (shape_eval(k, {p.x + h, p.y}).value - shape_eval(k, {p.x - h, p.y}).value) / (2 * h);
    const double fy =
        (shape_eval(k, {p.x, p.y + h}).value - shape_eval(k, {p.x, p.y - h}).value) / (2 * h);
    CHECK(g.x == doctest::Approx(fx).epsilon(1e-8));
    CHECK(g.y == doctest::Approx(fy).epsilon(1e-8));
  }
}

TEST_CASE("grid counts") {
  const auto g = build_grid(2, 2);
  CHECK(g.num_dofs() == 25);
  CHECK(g.num_elements() == 4);
  const auto g10 = build_grid(10, 10);
  CHECK(g10.num_dofs() == 441);
  CHECK(g10.hx() == doctest::Approx(0.1));
  const auto g42 = build_grid(4, 2);
  CHECK(g42.num_dofs() == 45);
  CHECK(g42.num_elements() == 8);
  CHECK_THROWS_AS(build_grid(3, 2), Error);
  CHECK_THROWS_AS(build_grid(0, 2), Error);
  CHECK_THROWS_AS(build_grid(-2, 2), Error);

  const auto lat = grid_from_lattice(10, 10);
  CHECK(lat.num_elements() == 25);
  CHECK(lat.lattice_spacing() == doctest::Approx(0.1));
  CHECK_THROWS_AS(grid_from_lattice(9, 10), Error);
}

TEST_CASE("every DOF belongs to between one and four elements") {
  const auto g = build_grid(4, 6);
  std::vector<int> count(g.num_dofs(), 0);
  for (int e = 0; e < g.num_elements(); ++e)
    for (int d : g.element_dofs(e)) ++count[d];
  for (int c : count) {
    CHECK(c >= 1);
    CHECK(c <= 4);
  }
}

TEST_CASE("boundary classification") {
  const auto mms = classified(4, 4, AnisotropyField::mms(1.0));
  CHECK(mms.classified());
  for (const auto& e : mms.edges()) {
    if (e.side == Side::left) CHECK(e.tag == EdgeTag::in);
    if (e.side == Side::right) CHECK(e.tag == EdgeTag::out);
    if (e.side == Side::bottom || e.side == Side::top) CHECK(e.tag == EdgeTag::parallel);
  }
  const auto c = classified(2, 2, AnisotropyField::constant({1.0, 0.0}));
  for (const auto& e : c.edges()) {
    if (e.side == Side::left) CHECK(e.tag == EdgeTag::in);
    if (e.side == Side::right) CHECK(e.tag == EdgeTag::out);
  }
  // A field rotating across one coarse edge cannot be resolved.
  AnisotropyField swirl([](Vec2 x) { return Vec2{std::cos(6 * x.y), std::sin(6 * x.y)}; },
                        [](Vec2) { return Mat2{}; });
  CHECK_THROWS_AS(classify_boundary(build_grid(2, 2), swirl), Error);
}

TEST_CASE("mass matrix") {
  const auto g = build_grid(2, 2);
  const auto m = assemble_mass(g);
  CHECK(total(m) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.is_symmetric(1e-14));
  // Corner basis on one element: (int l0^2)^2 over an h x h element, int_{-1}^{1} l0^2 = 4/15.
  const double h = 0.5;
  CHECK(m.at(0, 0) == doctest::Approx(std::pow(4.0 / 15.0 * h / 2, 2)).epsilon(1e-14));

  for (int n : {2, 4, 8}) {
    const auto mn = assemble_mass(build_grid(n, n));
    const auto dense = mn.to_dense();
    Eigen::Map<const Eigen::MatrixXd> a(dense.data(), mn.rows(), mn.cols());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("parallel and perpendicular forms split the stiffness matrix") {
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto field = AnisotropyField::mms(alpha);
    const auto g = build_grid(4, 4);
    const auto k = assemble_stiffness(g);
    const auto par = assemble_par(g, field, constant_field(1.0));
    const auto perp = assemble_perp(g, field, identity_tensor());
    const std::pair<double, const SparseMatrix*> terms[] = {
        {1.0, &par}, {1.0, &perp}, {-1.0, &k}};
    CHECK(combine(terms).max_abs() < 1e-12);
    CHECK(par.is_symmetric());
    CHECK(perp.is_symmetric());
  }
}

TEST_CASE("directional forms on aligned fields") {
  const auto field = AnisotropyField::constant({1.0, 0.0});
  const auto g = build_grid(4, 4);
  const auto par = assemble_par(g, field, constant_field(1.0));
  const auto perp = assemble_perp(g, field, identity_tensor());
  const DofVector one(g.num_dofs(), 1.0);
  for (double v : par.multiply(one)) CHECK(std::abs(v) < 1e-12);
  for (double v : perp.multiply(one)) CHECK(std::abs(v) < 1e-12);

  const auto ux = interpolate(g, [](Vec2 x) { return x.x; });
  const auto uy = interpolate(g, [](Vec2 x) { return x.y; });
  CHECK(std::abs(quadratic_form(perp, ux)) < 1e-13);
  CHECK(quadratic_form(perp, uy) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(quadratic_form(par, uy)) < 1e-13);
  CHECK(quadratic_form(par, ux) == doctest::Approx(1.0).epsilon(1e-13));

  // Any function of y alone is constant along b = (1, 0).
  const auto wave = interpolate(g, [](Vec2 x) { return std::sin(5 * x.y) + x.y * x.y; });
  for (double v : par.multiply(wave)) CHECK(std::abs(v) < 1e-11);
}

TEST_CASE("directional kernel for a diagonal constant field") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto field = AnisotropyField::constant({s, s});
  const auto g = build_grid(4, 4);
  const auto par = assemble_par(g, field, constant_field(1.0));
  // Constant along lattice diagonals i - j = const; x - y is exact in Q2.
  const auto u = interpolate(g, [](Vec2 x) { return (x.x - x.y) * (x.x - x.y) + 3 * (x.x - x.y); });
  for (double v : par.multiply(u)) CHECK(std::abs(v) < 1e-11);
}

TEST_CASE("non-unit direction is rejected") {
  AnisotropyField nan_field([](Vec2) { return Vec2{0.0, 0.0}; }, [](Vec2) { return Mat2{}; });
  const auto g = build_grid(2, 2);
  CHECK_THROWS_AS(assemble_par(g, nan_field, constant_field(1.0)), Error);
  CHECK_THROWS_AS(assemble_perp(g, nan_field, identity_tensor()), Error);
}

TEST_CASE("nonlinear parallel form scales with the state power") {
  const auto field = AnisotropyField::mms(1.0);
  const auto g = build_grid(4, 4);
  const auto par = assemble_par(g, field, constant_field(1.0));
  const DofVector one(g.num_dofs(), 1.0), four(g.num_dofs(), 4.0), c(g.num_dofs(), 2.7);
  const auto n1 = assemble_par_nl(g, field, constant_field(1.0), one, 2.5);
  const auto n4 = assemble_par_nl(g, field, constant_field(1.0), four, 2.5);
  const auto nc = assemble_par_nl(g, field, constant_field(1.0), c, 2.5);
  const double sc = std::pow(2.7, 2.5);
  for (std::size_t i = 0; i < par.nnz(); ++i) {
    CHECK(n1.values()[i] == doctest::Approx(par.values()[i]).epsilon(1e-14));
    CHECK(n4.values()[i] == doctest::Approx(32.0 * par.values()[i]).epsilon(1e-13));
    CHECK(nc.values()[i] == doctest::Approx(sc * par.values()[i]).epsilon(1e-13));
  }
  DofVector neg = one;
  neg[g.dof(4, 4)] = -10.0;
  try {
    assemble_par_nl(g, field, constant_field(1.0), neg, 2.5);
    FAIL("expected NegativeStateError");
  } catch (const NegativeStateError& e) {
    CHECK(e.value <= 0.0);
    CHECK(std::abs(e.location.x - 0.5) < 0.25 + 1e-12);
    CHECK(std::abs(e.location.y - 0.5) < 0.25 + 1e-12);
  }
}

TEST_CASE("robin boundary matrix") {
  const auto g = classified(4, 4, AnisotropyField::mms(1.0));
  CHECK(assemble_robin(g, 0.0).max_abs() == 0.0);
  const auto b = assemble_robin(g, 1.5);
  CHECK(total(b) == doctest::Approx(2.0 * 1.5).epsilon(1e-14));
  CHECK(b.is_symmetric());
  const auto dense = b.to_dense();
  Eigen::Map<const Eigen::MatrixXd> a(dense.data(), b.rows(), b.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(es.eigenvalues().minCoeff() > -1e-14);
  CHECK_THROWS_AS(assemble_robin(build_grid(2, 2), 1.0), Error);
}

TEST_CASE("load vectors") {
  const auto g = build_grid(2, 2);
  auto sum = [](const DofVector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  for (double v : assemble_load(g, [](double, Vec2) { return 0.0; }, 0.0)) CHECK(v == 0.0);
  CHECK(sum(assemble_load(g, [](double, Vec2) { return 1.0; }, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sum(assemble_load(g, [](double, Vec2 x) { return x.x; }, 0.0)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // Perimeter of the unit square.
  CHECK(sum(assemble_boundary_load(g, [](const BoundaryEdge&, Vec2) { return 1.0; })) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("L2 error norm") {
  const auto g = build_grid(4, 4);
  auto biq = [](double, Vec2 x) { return 1 + x.x - 2 * x.x * x.y + x.x * x.x * x.y * x.y; };
  const auto ui = interpolate(g, [&](Vec2 x) { return biq(0.0, x); });
  CHECK(l2_norm_error(g, ui, biq, 0.0, ErrorMode::absolute) < 1e-13);

  const DofVector zero(g.num_dofs(), 0.0);
  auto one = [](double, Vec2) { return 1.0; };
  CHECK(l2_norm_error(g, zero, one, 0.0, ErrorMode::absolute) == doctest::Approx(1.0));
  CHECK(l2_norm_error(g, zero, one, 0.0, ErrorMode::relative) == doctest::Approx(1.0));
  CHECK_THROWS_AS(
      l2_norm_error(g, zero, [](double, Vec2) { return 0.0; }, 0.0, ErrorMode::relative), Error);

  // Interpolation error of sin(pi x) decays like h^3.
  auto s = [](double, Vec2 x) { return std::sin(kPi * x.x); };
  double e[2];
  int i = 0;
  for (int n : {10, 20}) {
    const auto gn = grid_from_lattice(n, n);
    e[i++] = l2_norm_error(gn, interpolate(gn, [&](Vec2 x) { return s(0.0, x); }), s, 0.0,
                           ErrorMode::absolute);
  }
  const double order = std::log2(e[0] / e[1]);
  CHECK(order > 2.8);
  CHECK(order < 3.2);
}

TEST_CASE("field helpers") {
  const auto g = build_grid(2, 2);
  const auto u = interpolate(g, [](Vec2 x) { return 2 + x.x * x.y; });
  CHECK(integral(g, u) == doctest::Approx(2.25).epsilon(1e-14));
  CHECK(evaluate(g, u, 3, {0.0, 0.0}) == doctest::Approx(2 + 0.75 * 0.75));
  CHECK(l2_norm(g, DofVector(g.num_dofs(), 3.0)) == doctest::Approx(3.0));
  const auto low = min_at_quadrature(g, u);
  CHECK(low.value > 2.0);
  CHECK(low.value < 2.01);
}
