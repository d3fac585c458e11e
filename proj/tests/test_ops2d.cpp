#include <doctest.h>

#include <cmath>

#include "stagfv/harness.hpp"
#include "stagfv/ops2d.hpp"
#include "stagfv/rng.hpp"

using namespace stagfv;

namespace {

constexpr double kPi = 3.14159265358979323846;

CellField random_cell(const StaggeredMesh2D& m, RandomStream& rs) {
  CellField f = make_cell_field(m);
  for (double& v : f.values) v = rs.next(-1.0, 1.0);
  return f;
}

DualField random_dirichlet(const StaggeredMesh2D& m, RandomStream& rs) {
  DualField f = make_dual_field(m, true);
  for (std::size_t v = 0; v < m.n_v; ++v)
    if (!m.dual_is_boundary[v]) f.values[v] = rs.next(-1.0, 1.0);
  return f;
}

EdgeField random_interior(const StaggeredMesh2D& m, RandomStream& rs) {
  EdgeField f = make_edge_field(m, true);
  for (std::size_t e = 0; e < m.n_e; ++e) f.values[e] = rs.next(-1.0, 1.0);
  return f;
}

std::vector<StaggeredMesh2D> families(std::size_t n) {
  return {gen_rect(n + 1, n + 1), gen_perturbed(n + 1, n + 1, 0.1, 3), gen_tri_hex(n)};
}

}  // namespace

TEST_CASE("divergence: zero field, constant flow, and the raw formula") {
  const StaggeredMesh2D m = gen_rect(3, 3);
  const CellField z = div(m, make_edge_field(m));
  for (double v : z.values) CHECK(v == 0.0);

  const EdgeField flow = sample_edges(m, [](double, double) { return 1.0; },
                                      [](double, double) { return 0.0; });
  const CellField d = div(m, flow);
  for (std::size_t i = 0; i < m.n_c; ++i) CHECK(std::abs(d.values[i]) <= 1e-14);

  const StaggeredMesh2D m4 = gen_rect(4, 4);
  RandomStream rs(1);
  EdgeField u = make_edge_field(m4);
  for (double& v : u.values) v = rs.next(-1.0, 1.0);
  const CellField dd = div(m4, u);
  for (std::size_t i = 0; i < m4.n_cells(); ++i) {
    double s = 0.0;
    for (int e : m4.EC[i]) s += m4.edge[e].cell_sign(static_cast<int>(i)) * u.values[e] * m4.edge[e].l_e;
    CHECK(dd.values[i] == doctest::Approx(s / m4.cell_area[i]).epsilon(1e-13));
  }
}

TEST_CASE("curl of a rigid rotation is twice the angular rate") {
  const StaggeredMesh2D m = gen_rect(5, 5);
  const EdgeField u = sample_edges(m, [](double, double y) { return -y; },
                                   [](double x, double) { return x; });
  const DualField w = curl(m, u);
  for (std::size_t v = 0; v < m.n_v; ++v)
    CHECK(std::abs(w.values[v] - 2.0) <= 1e-10);
}

TEST_CASE("curl of a cell gradient vanishes identically") {
  RandomStream rs(2);
  for (const StaggeredMesh2D& m : families(6)) {
    for (int trial = 0; trial < 5; ++trial) {
      const CellField phi = random_cell(m, rs);
      const DualField cg = curl(m, grad_cell(m, phi));
      double scale = 0.0;
      for (const Edge2D& e : m.edge) scale = std::max(scale, 2.0 / (e.d_e * e.d_e));
      for (std::size_t v = 0; v < m.n_v; ++v)
        if (!m.dual_is_boundary[v]) CHECK(std::abs(cg.values[v]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("cell gradient: constants, coordinates, and the raw formula") {
  const StaggeredMesh2D m = gen_rect(4, 4);
  CellField c = make_cell_field(m);
  for (double& v : c.values) v = 7.0;
  for (double v : grad_cell(m, c).values) CHECK(v == 0.0);

  CellField xs = sample_cells(m, [](double x, double) { return x; });
  const EdgeField g = grad_cell(m, xs);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    CHECK(g.values[e] == doctest::Approx(m.edge[e].normal.x).epsilon(1e-13));

  RandomStream rs(3);
  const CellField phi = random_cell(m, rs);
  const EdgeField gp = grad_cell(m, phi);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    if (ed.cell2 == kGhost) continue;
    CHECK(gp.values[e] ==
          doctest::Approx((phi.values[ed.cell2] - phi.values[ed.cell1]) / ed.d_e));
  }
}

TEST_CASE("skew gradient: constants, divergence-free range, per-edge formula") {
  for (const StaggeredMesh2D& m : families(6)) {
    DualField c = make_dual_field(m, true);
    for (double& v : c.values) v = 4.0;  // constant, no boundary zeros
    c.dirichlet = false;
    const EdgeField gc = perp_grad_dual(m, c);
    for (std::size_t e = 0; e < m.n_e; ++e) CHECK(gc.values[e] == 0.0);

    RandomStream rs(4);
    for (int trial = 0; trial < 5; ++trial) {
      const DualField psi = random_dirichlet(m, rs);
      const EdgeField u = perp_grad_dual(m, psi);
      CHECK(u.interior);
      for (std::size_t e = m.n_e; e < m.n_edges_total(); ++e) CHECK(u.values[e] == 0.0);
      const CellField d = div(m, u);
      double scale = 0.0;
      for (const Edge2D& e : m.edge) scale = std::max(scale, 2.0 / (e.l_e * m.cell_area[0]));
      for (std::size_t i = 0; i < m.n_c; ++i) CHECK(std::abs(d.values[i]) <= 1e-12 * scale);
    }
  }

  const StaggeredMesh2D r = gen_rect(5, 5);
  const DualField xy = sample_duals(r, [](double x, double y) { return x * y; });
  const EdgeField u = perp_grad_dual(r, xy);
  for (std::size_t e = 0; e < r.n_e; ++e) {
    const Edge2D& ed = r.edge[e];
    const double expect = -(xy.values[ed.dual2] - xy.values[ed.dual1]) / ed.l_e;
    CHECK(u.values[e] == doctest::Approx(expect));
  }
}

TEST_CASE("edge inner product: diamond weights and bilinearity") {
  const StaggeredMesh2D m = gen_rect(3, 3);
  EdgeField ones = make_edge_field(m);
  for (double& v : ones.values) v = 1.0;
  CHECK(inner_edge(m, ones, ones) == doctest::Approx(1.5).epsilon(1e-15));

  RandomStream rs(5);
  EdgeField u = make_edge_field(m), v = make_edge_field(m);
  for (double& x : u.values) x = rs.next(-1.0, 1.0);
  for (double& x : v.values) x = rs.next(-1.0, 1.0);
  const double alpha = 2.75;
  EdgeField au = u;
  for (double& x : au.values) x *= alpha;
  CHECK(inner_edge(m, au, v) == doctest::Approx(alpha * inner_edge(m, u, v)).epsilon(1e-13));
}

TEST_CASE("cell and dual inner products: area weights, symmetry, hand sums") {
  for (const StaggeredMesh2D& m : families(4)) {
    CellField c1 = make_cell_field(m);
    for (double& v : c1.values) v = 1.0;
    CHECK(inner_cell(m, c1, c1) == doctest::Approx(m.domain_area).epsilon(1e-12));
    DualField d1 = make_dual_field(m);
    for (double& v : d1.values) v = 1.0;
    CHECK(inner_dual(m, d1, d1) == doctest::Approx(m.domain_area).epsilon(1e-12));
  }
  const StaggeredMesh2D m = gen_rect(3, 3);
  RandomStream rs(6);
  CellField a = random_cell(m, rs), b = random_cell(m, rs);
  CHECK(inner_cell(m, a, b) == inner_cell(m, b, a));
  double hand = 0.0;
  for (std::size_t i = 0; i < m.n_cells(); ++i)
    hand += a.values[i] * b.values[i] * m.cell_area[i];
  CHECK(inner_cell(m, a, b) == doctest::Approx(hand));

  DualField da = make_dual_field(m), db = make_dual_field(m);
  for (double& v : da.values) v = rs.next(-1.0, 1.0);
  for (double& v : db.values) v = rs.next(-1.0, 1.0);
  CHECK(inner_dual(m, da, db) == inner_dual(m, db, da));
  double handd = 0.0;
  for (std::size_t v = 0; v < m.n_v; ++v) handd += da.values[v] * db.values[v] * m.dual_area[v];
  CHECK(inner_dual(m, da, db) == doctest::Approx(handd));
}

TEST_CASE("adjointness of gradient/divergence and skew-gradient/curl with the factor two") {
  RandomStream rs(7);
  for (std::size_t n : {8, 16}) {
    for (const StaggeredMesh2D& m : families(n)) {
      for (int trial = 0; trial < 50; ++trial) {
        const CellField phi = random_cell(m, rs);
        const DualField psi = random_dirichlet(m, rs);
        const EdgeField u = random_interior(m, rs);
        const double s1 =
            2.0 * inner_edge(m, grad_cell(m, phi), u) + inner_cell(m, phi, div(m, u));
        const double s2 =
            2.0 * inner_edge(m, perp_grad_dual(m, psi), u) + inner_dual(m, psi, curl(m, u));
        const double scale1 = std::abs(inner_cell(m, phi, div(m, u))) + 1.0;
        const double scale2 = std::abs(inner_dual(m, psi, curl(m, u))) + 1.0;
        CHECK(std::abs(s1) <= 1e-12 * scale1);
        CHECK(std::abs(s2) <= 1e-12 * scale2);
      }
    }
  }
}

TEST_CASE("velocity restriction: zero, divergence-free, and the difference oracle") {
  const StaggeredMesh2D m = gen_rect(9, 9);
  const EdgeField z = restrict_velocity(m, [](double, double) { return 0.0; });
  for (double v : z.values) CHECK(v == 0.0);

  auto psi = [](double x, double y) {
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    return sx * sx * sy * sy;
  };
  const EdgeField u = restrict_velocity(m, psi);
  const CellField d = div(m, u);
  for (std::size_t i = 0; i < m.n_c; ++i) CHECK(std::abs(d.values[i]) <= 1e-11);
  for (std::size_t e = 0; e < m.n_e; ++e) {
    const Edge2D& ed = m.edge[e];
    const Vec2 p1 = m.dual_center[ed.dual1], p2 = m.dual_center[ed.dual2];
    CHECK(u.values[e] ==
          doctest::Approx(-(psi(p2.x, p2.y) - psi(p1.x, p1.y)) / ed.l_e).epsilon(1e-12));
  }
}

TEST_CASE("prolongation pairs the streamfunction with the discrete vorticity") {
  const StaggeredMesh2D m = gen_rect(6, 6);
  const ProlongedPair zero = prolong(m, make_edge_field(m, true), make_dual_field(m, true));
  for (double v : zero.psi.values) CHECK(v == 0.0);
  for (double v : zero.omega.values) CHECK(v == 0.0);

  RandomStream rs(8);
  const DualField psi = random_dirichlet(m, rs);
  const EdgeField u = perp_grad_dual(m, psi);
  const ProlongedPair pp = prolong(m, u, psi);
  const DualField cu = curl(m, u);
  for (std::size_t v = 0; v < m.n_v; ++v) CHECK(pp.omega.values[v] == cu.values[v]);

  EdgeField off = u;
  off.values[0] += 1e-6;
  CHECK_THROWS_AS(prolong(m, off, psi), RepresentationMismatch);
}

TEST_CASE("forcing discretization: zeros, exact linears, and the difference oracle") {
  const StaggeredMesh2D m = gen_rect(6, 6);
  const ForcingDiscretization z =
      discretize_forcing(m, [](double, double) { return 0.0; }, [](double, double) { return 0.0; });
  for (double v : z.f.values) CHECK(v == 0.0);

  // linear potential: the discrete gradient reproduces the constant field
  const ForcingDiscretization lin = discretize_forcing(
      m, [](double, double) { return 0.0; }, [](double x, double y) { return x + 2.0 * y; });
  for (std::size_t e = 0; e < m.n_e; ++e) {
    const Vec2 n = m.edge[e].normal;
    CHECK(lin.f.values[e] == doctest::Approx(n.x + 2.0 * n.y).epsilon(1e-12));
  }

  auto psif = [](double x, double y) {
    const double sx = std::sin(kPi * x), sy = std::sin(kPi * y);
    return -2.0 * kPi * kPi *
           (std::cos(2.0 * kPi * x) * sy * sy + sx * sx * std::cos(2.0 * kPi * y));
  };
  auto phif = [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); };
  const ForcingDiscretization fd = discretize_forcing(m, psif, phif);
  for (std::size_t e = 0; e < m.n_e; ++e) {
    const Edge2D& ed = m.edge[e];
    const Vec2 p1 = m.dual_center[ed.dual1], p2 = m.dual_center[ed.dual2];
    const Vec2 c1 = m.cell_center[ed.cell1], c2 = m.cell_center[ed.cell2];
    const double expect = -(psif(p2.x, p2.y) - psif(p1.x, p1.y)) / ed.l_e +
                          (phif(c2.x, c2.y) - phif(c1.x, c1.y)) / ed.d_e;
    CHECK(fd.f.values[e] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("discrete curl consistency rates per mesh family") {
  auto tau_omega = [](const StaggeredMesh2D& m, const Manufactured2D& mc) {
    const EdgeField ru = restrict_velocity(m, mc.fields.psi);
    const DualField cu = curl(m, ru);
    double sup = 0.0;
    for (std::size_t v = 0; v < m.n_v; ++v)
      if (!m.dual_is_boundary[v])
        sup = std::max(sup,
                       std::abs(cu.values[v] -
                                mc.fields.omega(m.dual_center[v].x, m.dual_center[v].y)));
    return sup;
  };
  std::vector<std::pair<double, double>> rect_pts, pert_pts, hex_pts;
  const Manufactured2D sq = case_2d("sinsq");
  const Manufactured2D rh = case_2d("sinsq_rhombus");
  for (std::size_t n : {9, 17, 33, 65}) {
    rect_pts.emplace_back(1.0 / (n - 1), tau_omega(gen_rect(n, n), sq));
    pert_pts.emplace_back(1.0 / (n - 1), tau_omega(gen_perturbed(n, n, 0.1, 3), sq));
  }
  for (std::size_t n : {8, 16, 32, 64}) hex_pts.emplace_back(1.0 / n, tau_omega(gen_tri_hex(n), rh));
  CHECK(fit_rate(rect_pts) >= 1.9);
  CHECK(fit_rate(hex_pts) >= 1.9);
  CHECK(fit_rate(pert_pts) >= 0.9);
}

TEST_CASE("velocity-vorticity poincare constant stays bounded under refinement") {
  for (auto kind : {MeshFamily2D::Rect, MeshFamily2D::Perturbed, MeshFamily2D::TriHex}) {
    MeshFamily2D fam;
    fam.kind = kind;
    double prev = 0.0;
    RandomStream rs(11);
    for (std::size_t n : {8, 16}) {
      const StaggeredMesh2D m = build_mesh_2d(fam, n);
      double cp = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const DualField psi = random_dirichlet(m, rs);
        const EdgeField u = perp_grad_dual(m, psi);
        const DualField cu = curl(m, u);
        const double nu = std::sqrt(inner_edge(m, u, u));
        const double nc = std::sqrt(inner_dual_interior(m, cu, cu));
        cp = std::max(cp, nu / nc);
      }
      if (prev > 0.0) CHECK(cp <= prev * 1.10);
      prev = cp;
    }
  }
}
