#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stagfv/mesh2d.hpp"

using namespace stagfv;

TEST_CASE("rect 3x3: the hand-counted configuration") {
  const StaggeredMesh2D m = gen_rect(3, 3);
  CHECK(m.n_c == 1);
  CHECK(m.n_cb == 8);
  CHECK(m.n_v == 4);
  CHECK(m.n_e == 4);
  CHECK(m.n_eb == 8);
  CHECK(m.n_c + m.n_cb + m.n_v == m.n_e + m.n_eb + 1);
  for (const Edge2D& e : m.edge) {
    CHECK(e.l_e == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.d_e == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.bisection_offset == 0.0);
    CHECK(std::abs(dot(e.normal, e.tangent())) == 0.0);
  }
  CHECK(validate(m).all_pass());
}

TEST_CASE("rect family: euler relation and validation at several sizes") {
  for (std::size_t n : {2, 3, 4, 7}) {
    const StaggeredMesh2D m = gen_rect(n, n + 1);
    CHECK(m.n_c + m.n_cb + m.n_v == m.n_e + m.n_eb + 1);
    CHECK(validate(m).all_pass());
  }
  CHECK_THROWS_AS(gen_rect(1, 3), InvalidCount);
}

TEST_CASE("perturbed family: deterministic, degenerate at zero amplitude") {
  const StaggeredMesh2D a = gen_perturbed(8, 8, 0.1, 3);
  const StaggeredMesh2D b = gen_perturbed(8, 8, 0.1, 3);
  REQUIRE(a.n_edges_total() == b.n_edges_total());
  for (std::size_t e = 0; e < a.n_edges_total(); ++e) {
    CHECK(a.edge[e].l_e == b.edge[e].l_e);
    CHECK(a.edge[e].d_e == b.edge[e].d_e);
  }
  for (std::size_t i = 0; i < a.n_cells(); ++i) {
    CHECK(a.cell_center[i].x == b.cell_center[i].x);
    CHECK(a.cell_center[i].y == b.cell_center[i].y);
  }

  const StaggeredMesh2D z = gen_perturbed(5, 6, 0.0, 3);
  const StaggeredMesh2D r = gen_rect(5, 6);
  for (std::size_t i = 0; i < z.n_cells(); ++i) {
    CHECK(z.cell_center[i].x == r.cell_center[i].x);
    CHECK(z.cell_center[i].y == r.cell_center[i].y);
    CHECK(z.cell_area[i] == r.cell_area[i]);
  }
  CHECK_THROWS_AS(gen_perturbed(8, 8, 0.3, 3), InvalidRatio);
}

TEST_CASE("perturbed family: bisection offsets shrink at least like h^2") {
  auto max_offset = [](const StaggeredMesh2D& m) {
    double s = 0.0;
    for (const Edge2D& e : m.edge) s = std::max(s, e.bisection_offset);
    return s;
  };
  const double coarse = max_offset(gen_perturbed(8, 8, 0.1, 3));
  const double fine = max_offset(gen_perturbed(16, 16, 0.1, 3));
  CHECK(coarse > 0.0);
  CHECK(coarse / fine >= 3.2);

  // offset / h^2 stays bounded across three refinement levels
  double worst_ratio = 0.0;
  for (std::size_t n : {8, 16, 32}) {
    const StaggeredMesh2D m = gen_perturbed(n, n, 0.1, 3);
    worst_ratio = std::max(worst_ratio, max_offset(m) / (m.h * m.h));
  }
  CHECK(worst_ratio <= 2.0);
}

TEST_CASE("tri-hex family: lattice symmetry and euler relation") {
  for (std::size_t n : {2, 3, 8}) {
    const StaggeredMesh2D m = gen_tri_hex(n);
    CHECK(m.n_c + m.n_cb + m.n_v == m.n_e + m.n_eb + 1);
    double l0 = m.edge[0].l_e, d0 = m.edge[0].d_e;
    for (const Edge2D& e : m.edge) {
      CHECK(e.l_e == doctest::Approx(l0).epsilon(1e-12));
      CHECK(e.d_e == doctest::Approx(d0).epsilon(1e-12));
    }
    const MeshQualityReport rep = validate(m);
    CHECK(rep.all_pass());
    CHECK(rep.find("orthogonality")->magnitude <= 1e-12);
    // boundary dual cells sit on the domain boundary
    bool has_boundary_duals = false;
    for (auto f : m.dual_is_boundary) has_boundary_duals = has_boundary_duals || f;
    CHECK(has_boundary_duals);
  }
  CHECK_THROWS_AS(gen_tri_hex(1), InvalidCount);
}

TEST_CASE("diamond area identity and area totals") {
  for (const StaggeredMesh2D& m :
       {gen_rect(5, 5), gen_perturbed(7, 7, 0.12, 2), gen_tri_hex(5)}) {
    for (std::size_t e = 0; e < m.n_e; ++e) {
      const Edge2D& ed = m.edge[e];
      // shoelace area of the quadrilateral (c1, d1, c2, d2)
      const Vec2 q[4] = {m.cell_center[ed.cell1], m.dual_center[ed.dual1],
                         m.cell_center[ed.cell2], m.dual_center[ed.dual2]};
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += cross(q[k], q[(k + 1) % 4]);
      CHECK(std::abs(0.5 * std::abs(s) - ed.diamond_area()) <= 1e-12);
    }
    double cells = 0.0, duals = 0.0;
    for (double v : m.cell_area) cells += v;
    for (double v : m.dual_area) duals += v;
    CHECK(cells == doctest::Approx(m.domain_area).epsilon(1e-12));
    CHECK(duals == doctest::Approx(m.domain_area).epsilon(1e-12));
  }
}

TEST_CASE("validator catches injected faults") {
  // flipped direction indicator: swap the cells without flipping the normal
  StaggeredMesh2D m = gen_rect(4, 4);
  std::swap(m.edge[0].cell1, m.edge[0].cell2);
  const MeshQualityReport r1 = validate(m);
  CHECK_FALSE(r1.find("orientation")->pass);
  CHECK(r1.find("orientation")->detail.find("edge 0") != std::string::npos);

  // dual center displaced by 0.3 h along an incident primary edge; the edge
  // midpoint moves by 0.15 h, which exceeds 2 h^2 at this resolution
  StaggeredMesh2D m2 = gen_rect(20, 20);
  const Edge2D& e0 = m2.edge[0];
  const int v = e0.dual1 != kGhost ? e0.dual1 : e0.dual2;
  m2.dual_center[v] = m2.dual_center[v] + (0.3 * m2.h) * e0.tangent();
  CHECK_FALSE(validate(m2).find("near-bisection")->pass);
}

TEST_CASE("save and load round-trip bit-exactly") {
  const StaggeredMesh2D m = gen_perturbed(8, 8, 0.1, 3);
  std::stringstream ss;
  save(m, ss);
  const StaggeredMesh2D r = load_mesh2d(ss);
  REQUIRE(r.n_cells() == m.n_cells());
  REQUIRE(r.n_v == m.n_v);
  REQUIRE(r.n_edges_total() == m.n_edges_total());
  CHECK(r.n_e == m.n_e);
  CHECK(r.n_eb == m.n_eb);
  for (std::size_t i = 0; i < m.n_cells(); ++i) {
    CHECK(r.cell_center[i].x == m.cell_center[i].x);
    CHECK(r.cell_center[i].y == m.cell_center[i].y);
    CHECK(r.cell_area[i] == m.cell_area[i]);
  }
  for (std::size_t v = 0; v < m.n_v; ++v) {
    CHECK(r.dual_center[v].x == m.dual_center[v].x);
    CHECK(r.dual_center[v].y == m.dual_center[v].y);
    CHECK(r.dual_area[v] == m.dual_area[v]);
    CHECK(r.dual_is_boundary[v] == m.dual_is_boundary[v]);
  }
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    CHECK(r.edge[e].cell1 == m.edge[e].cell1);
    CHECK(r.edge[e].cell2 == m.edge[e].cell2);
    CHECK(r.edge[e].dual1 == m.edge[e].dual1);
    CHECK(r.edge[e].dual2 == m.edge[e].dual2);
    CHECK(r.edge[e].l_e == m.edge[e].l_e);
    CHECK(r.edge[e].d_e == m.edge[e].d_e);
    CHECK(r.edge[e].normal.x == m.edge[e].normal.x);
  }
  CHECK(r.EC == m.EC);
  CHECK(r.EV == m.EV);

  // comments are tolerated anywhere
  std::stringstream ss2;
  ss2 << "# generated mesh\n";
  save(gen_tri_hex(3), ss2);
  CHECK(validate(load_mesh2d(ss2)).all_pass());
}

TEST_CASE("loader rejects truncated files and invariant violations") {
  const StaggeredMesh2D m = gen_rect(3, 3);
  std::stringstream ss;
  save(m, ss);
  const std::string text = ss.str();

  std::stringstream trunc(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(load_mesh2d(trunc), ParseError);

  // two cells, two duals, two edges: parses and is self-consistent, but
  // 2 + 0 + 2 != 2 + 0 + 1
  const char* euler_bad =
      "mesh2d 1\n"
      "counts 2 0 2 2 0\n"
      "cells\n0.25 0.5 0.5\n0.75 0.5 0.5\n"
      "duals\n0.5 0.25 0.25 0\n0.5 0.75 0.25 0\n"
      "edges\n1 2 1 2 1 0 0.5 0.5\n1 2 1 2 1 0 0.5 0.5\n"
      "connectivity\nEC\n1 2\n1 2\nEV\n1 2\n1 2\n";
  std::stringstream bad(euler_bad);
  CHECK_THROWS_AS(load_mesh2d(bad), InvariantViolation);
  std::stringstream again(euler_bad);
  CHECK_NOTHROW(load_mesh2d(again, /*force=*/true));
}
