#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stagfv/harness.hpp"

using namespace stagfv;

namespace {

// centered five-point second derivative, used as an independent check on the
// hand-written derivatives of the manufactured fields
double laplacian_fd(const ScalarFn2& f, double x, double y, double h = 1e-3) {
  const double fxx =
      (-f(x + 2 * h, y) + 16 * f(x + h, y) - 30 * f(x, y) + 16 * f(x - h, y) - f(x - 2 * h, y)) /
      (12 * h * h);
  const double fyy =
      (-f(x, y + 2 * h) + 16 * f(x, y + h) - 30 * f(x, y) + 16 * f(x, y - h) - f(x, y - 2 * h)) /
      (12 * h * h);
  return fxx + fyy;
}

double deriv_fd(const ScalarFn2& f, double x, double y, bool in_x, double h = 1e-5) {
  return in_x ? (f(x + h, y) - f(x - h, y)) / (2 * h) : (f(x, y + h) - f(x, y - h)) / (2 * h);
}

}  // namespace

TEST_CASE("fit_rate recovers exact power laws") {
  std::vector<std::pair<double, double>> lin, quad, pinned;
  for (double h : {0.2, 0.1, 0.05, 0.025}) {
    lin.emplace_back(h, 3.0 * h);
    quad.emplace_back(h, 0.7 * h * h);
  }
  CHECK(fit_rate(lin) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_rate(quad) == doctest::Approx(2.0).epsilon(1e-12));
  pinned = {{0.1, 1e-2}, {0.05, 2.5e-3}, {0.025, 6.25e-4}};
  CHECK(fit_rate(pinned) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(fit_rate({{0.1, 1.0}, {0.05, 0.5}}), DegenerateInput);
  CHECK(std::isinf(fit_rate({{0.1, 0.0}, {0.05, 0.0}, {0.025, 0.0}})));
}

TEST_CASE("manufactured 2D cases are internally consistent") {
  for (const char* name : {"sinsq", "sinsq_rhombus"}) {
    const Manufactured2D mc = case_2d(name);
    // probe points inside both domains
    const double pts[][2] = {{0.31, 0.21}, {0.55, 0.42}, {0.72, 0.33}, {0.44, 0.52}};
    for (const auto& p : pts) {
      const double x = p[0], y = p[1];
      CHECK(mc.fields.omega(x, y) ==
            doctest::Approx(laplacian_fd(mc.fields.psi, x, y)).epsilon(1e-5));
      CHECK(mc.fields.psi_f(x, y) == doctest::Approx(-mc.fields.omega(x, y)).epsilon(1e-13));
      CHECK(mc.fields.grad_p_x(x, y) ==
            doctest::Approx(deriv_fd(mc.fields.p, x, y, true)).epsilon(1e-7));
      CHECK(mc.fields.grad_p_y(x, y) ==
            doctest::Approx(deriv_fd(mc.fields.p, x, y, false)).epsilon(1e-7));
      CHECK(mc.fields.grad_psi_f_x(x, y) ==
            doctest::Approx(deriv_fd(mc.fields.psi_f, x, y, true)).epsilon(1e-6));
      CHECK(mc.fields.grad_psi_f_y(x, y) ==
            doctest::Approx(deriv_fd(mc.fields.psi_f, x, y, false)).epsilon(1e-6));
      CHECK(mc.u_x(x, y) == doctest::Approx(-deriv_fd(mc.fields.psi, x, y, false)).epsilon(1e-7));
      CHECK(mc.u_y(x, y) == doctest::Approx(deriv_fd(mc.fields.psi, x, y, true)).epsilon(1e-7));
    }
  }
}

TEST_CASE("1D study: levels are ordered and rates are reproducible") {
  MeshFamily1D fam;
  fam.kind = MeshFamily1D::Random;
  fam.ratio = 3.0;
  fam.seed = 7;
  const ConvergenceReport a = run_1d_study(case_1d("sinpi"), fam, {16, 32, 64});
  const ConvergenceReport b = run_1d_study(case_1d("sinpi"), fam, {16, 32, 64});
  REQUIRE(a.levels.size() == 3);
  for (std::size_t k = 1; k < a.levels.size(); ++k) CHECK(a.levels[k].h < a.levels[k - 1].h);
  CHECK(a.rate_l2 == b.rate_l2);
  CHECK(a.rate_h1 == b.rate_h1);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.levels[k].err_l2 == b.levels[k].err_l2);
    CHECK(a.levels[k].err_h1 == b.levels[k].err_h1);
  }
}

TEST_CASE("quadratic case on midpoint meshes: interior fluxes exact") {
  // flux consistency vanishes at every interior face; the end faces carry the
  // half-cell secant flux, which leaves a second-order footprint in the
  // solution rather than an exact one
  const Manufactured1D mc = case_1d("poly2");
  for (std::size_t N : {16, 64}) {
    const Mesh1D m = gen_random(N, 3.0, 7, CenterRule::Midpoint);
    const Grid1DField tau = flux_truncation(m, mc.u, mc.u_x);
    for (std::size_t i = 1; i < m.N; ++i) CHECK(std::abs(tau.values[i]) <= 1e-13);
    const Elliptic1DSolution sol = assemble_and_solve(m, mc.f);
    double emax = 0.0;
    for (std::size_t i = 0; i < m.N; ++i)
      emax = std::max(emax, std::abs(sol.u_h.values[i] - mc.u(m.x_center[i])));
    CHECK(emax <= m.h_max() * m.h_max());
  }
}

TEST_CASE("csv output is deterministic apart from the timing column") {
  MeshFamily1D fam;
  fam.kind = MeshFamily1D::Random;
  auto strip_seconds = [](const ConvergenceReport& r) {
    std::ostringstream os;
    r.write_csv(os);
    std::istringstream is(os.str());
    std::string line, out;
    while (std::getline(is, line)) {
      const auto last = line.rfind(',');
      out += (line[0] != '#' && last != std::string::npos && line.find("level,") != 0)
                 ? line.substr(0, last) + "\n"
                 : line + "\n";
    }
    return out;
  };
  const auto a = strip_seconds(run_1d_study(case_1d("sinpi"), fam, {16, 32, 64}));
  const auto b = strip_seconds(run_1d_study(case_1d("sinpi"), fam, {16, 32, 64}));
  CHECK(a == b);
  CHECK(a.find("level,h,n_dof,err_l2,err_h1,tau_p,tau_f,tau_omega,cg_iters,seconds") !=
        std::string::npos);
}

TEST_CASE("2D zero case solves to roundoff") {
  Manufactured2D zero;
  zero.name = "zero";
  auto z = [](double, double) { return 0.0; };
  zero.fields = {z, z, z, z, z, z, z, z, z};
  zero.u_x = z;
  zero.u_y = z;
  MeshFamily2D fam;
  fam.kind = MeshFamily2D::Rect;
  const ConvergenceReport rep = run_2d_study(zero, fam, {9, 17, 33}, 1e-12, false);
  for (const auto& r : rep.levels) {
    CHECK(r.err_l2 <= 1e-12);
    CHECK(r.err_h1 <= 1e-12);
  }
  CHECK(std::isinf(rep.rate_l2));
}

TEST_CASE("streamfunction and vorticity restrictions converge monotonically") {
  MeshFamily2D fam;
  fam.kind = MeshFamily2D::Rect;
  const Manufactured2D mc = case_2d("sinsq");
  std::vector<double> e_psi, e_om;
  for (std::size_t n : {9, 17, 33}) {
    const StaggeredMesh2D m = build_mesh_2d(fam, n);
    const StokesSolution sol = solve_stokes(m, mc.fields.psi_f, mc.fields.phi_f);
    DualField dpsi = sol.psi;
    for (std::size_t v = 0; v < m.n_v; ++v)
      dpsi.values[v] -= m.dual_is_boundary[v]
                            ? 0.0
                            : mc.fields.psi(m.dual_center[v].x, m.dual_center[v].y);
    e_psi.push_back(std::sqrt(inner_dual_interior(m, dpsi, dpsi)));
    const EdgeField ru = restrict_velocity(m, mc.fields.psi);
    DualField dom = curl(m, ru);
    for (std::size_t v = 0; v < m.n_v; ++v)
      dom.values[v] -= mc.fields.omega(m.dual_center[v].x, m.dual_center[v].y);
    e_om.push_back(std::sqrt(inner_dual_interior(m, dom, dom)));
  }
  for (std::size_t k = 1; k < e_psi.size(); ++k) {
    CHECK(e_psi[k] < e_psi[k - 1]);
    CHECK(e_om[k] < e_om[k - 1]);
  }
}
