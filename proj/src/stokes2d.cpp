#include "stagfv/stokes2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stagfv {

namespace {
constexpr std::array<double, 5> kGaussX = {-0.90617984593866396, -0.53846931010568311, 0.0,
                                           0.53846931010568311, 0.90617984593866396};
constexpr std::array<double, 5> kGaussW = {0.23692688505618908, 0.47862867049936647,
                                           0.56888888888888889, 0.47862867049936647,
                                           0.23692688505618908};
}  // namespace

VertexLaplacian assemble_vertex_laplacian(const StaggeredMesh2D& m) {
  VertexLaplacian L;
  L.dof_of_dual.assign(m.n_v, -1);
  // without boundary duals the operator annihilates constants; pin one dual
  L.gauge_pinned = m.n_v_interior() == m.n_v;
  bool pin_spent = !L.gauge_pinned;
  for (std::size_t v = 0; v < m.n_v; ++v) {
    if (m.dual_is_boundary[v]) continue;
    if (!pin_spent) {
      pin_spent = true;
      continue;
    }
    L.dof_of_dual[v] = static_cast<int>(L.dual_of_dof.size());
    L.dual_of_dof.push_back(static_cast<int>(v));
  }

  SparseBuilder b(L.dual_of_dof.size());
  for (std::size_t k = 0; k < L.dual_of_dof.size(); ++k) {
    const int v = L.dual_of_dof[k];
    double diag = 0.0;
    for (int eidx : m.EV[v]) {
      const Edge2D& ed = m.edge[eidx];
      if (m.edge_is_boundary(eidx)) continue;  // no coupling through boundary pairs
      const double c = ed.d_e / ed.l_e;
      const int other = ed.dual1 == v ? ed.dual2 : ed.dual1;
      if (other == kGhost) continue;
      diag += c;
      const int dof = L.dof_of_dual[other];
      if (dof >= 0) b.add(k, dof, -c);
      // boundary or pinned duals are Dirichlet-eliminated
    }
    b.add(k, k, diag);
  }
  L.A = b.build();
  return L;
}

double a_h(const StaggeredMesh2D& m, const EdgeField& u, const EdgeField& v) {
  return inner_dual_interior(m, curl(m, u), curl(m, v));
}

StokesSolution solve_stokes(const StaggeredMesh2D& m, const ScalarFn2& psi_f,
                            const ScalarFn2& phi_f, double tol, int max_iter) {
  StokesSolution sol;
  const VertexLaplacian L = assemble_vertex_laplacian(m);
  const std::size_t ndof = L.dual_of_dof.size();

  // forcing potentials at the mesh points; the stream potential belongs to
  // the dirichlet dual class (its canonical representative vanishes on the
  // boundary, where the boundary dual centers sit)
  sol.psi_f = sample_duals(m, psi_f);
  sol.psi_f.dirichlet = true;
  for (std::size_t v = 0; v < m.n_v; ++v)
    if (m.dual_is_boundary[v]) sol.psi_f.values[v] = 0.0;
  sol.phi_f = sample_cells(m, phi_f);

  // rhs b_nu = |A_nu| psi_f_nu over the solved duals; on meshes without
  // boundary duals the operator annihilates constants, so the data is
  // projected onto its range and the projected potential is the one the
  // discrete problem actually sees (kept in sol.psi_f)
  std::vector<double> b(ndof);
  for (std::size_t k = 0; k < ndof; ++k) {
    const int v = L.dual_of_dof[k];
    b[k] = m.dual_area[v] * sol.psi_f.values[v];
  }
  if (L.gauge_pinned) {
    double defect = 0.0;
    std::size_t n_int = 0;
    for (std::size_t v = 0; v < m.n_v; ++v)
      if (!m.dual_is_boundary[v]) {
        defect += m.dual_area[v] * sol.psi_f.values[v];
        ++n_int;
      }
    const double shift = defect / static_cast<double>(n_int);
    for (std::size_t k = 0; k < ndof; ++k) b[k] -= shift;
    for (std::size_t v = 0; v < m.n_v; ++v)
      if (!m.dual_is_boundary[v])
        sol.psi_f.values[v] -= shift / m.dual_area[v];
  }

  auto [x, rep] = cg_solve(L.A, b, tol, max_iter);
  sol.solve_report = rep;

  sol.psi = make_dual_field(m, true);
  for (std::size_t k = 0; k < ndof; ++k) sol.psi.values[L.dual_of_dof[k]] = x[k];
  if (L.gauge_pinned) {
    // shift so the mean over wall-adjacent duals vanishes (the discrete
    // analogue of a zero boundary value; second-order because the normal
    // derivative vanishes at the wall)
    double s = 0.0;
    std::size_t cnt = 0;
    for (std::size_t v = 0; v < m.n_v; ++v) {
      bool near_wall = false;
      for (int e : m.EV[v]) near_wall = near_wall || m.edge_is_boundary(e);
      if (near_wall) {
        s += sol.psi.values[v];
        ++cnt;
      }
    }
    const double shift = cnt ? s / static_cast<double>(cnt) : 0.0;
    for (std::size_t v = 0; v < m.n_v; ++v)
      if (!m.dual_is_boundary[v]) sol.psi.values[v] -= shift;
  }

  sol.u = perp_grad_dual(m, sol.psi);
  sol.omega = curl(m, sol.u);

  // pressure: the momentum equation forces grad p = grad phi_f on interior
  // pairs, so p is the scalar potential normalized to zero mean
  sol.p = sol.phi_f;
  double pm = 0.0, area = 0.0;
  for (std::size_t i = 0; i < m.n_cells(); ++i) {
    pm += sol.p.values[i] * m.cell_area[i];
    area += m.cell_area[i];
  }
  for (double& v : sol.p.values) v -= pm / area;

  // forcing field from the projected potentials
  const EdgeField fp = perp_grad_dual(m, sol.psi_f);
  const EdgeField gq = grad_cell(m, sol.phi_f);
  sol.f = make_edge_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    sol.f.values[e] = fp.values[e] + gq.values[e];

  // edgewise momentum residual, skipping stencils that touch untrusted
  // boundary-dual vorticity
  const EdgeField pw = perp_grad_dual(m, sol.omega);
  const EdgeField gp = grad_cell(m, sol.p);
  double res = 0.0;
  for (std::size_t e = 0; e < m.n_e; ++e) {
    const Edge2D& ed = m.edge[e];
    if (ed.dual1 == kGhost || ed.dual2 == kGhost) continue;
    if (m.dual_is_boundary[ed.dual1] || m.dual_is_boundary[ed.dual2]) continue;
    res = std::max(res, std::abs(-pw.values[e] + gp.values[e] - sol.f.values[e]));
  }
  sol.momentum_residual_inf = res;

  // scale under which "residual <= 10 tol scale" is guaranteed by the CG
  // stopping criterion: one unit of relative solver residual amplified
  // through perp(curl residual / |A|), plus the forcing magnitude
  double amin = 1e300, lmin = 1e300, fmax = 0.0;
  for (std::size_t v = 0; v < m.n_v; ++v)
    if (!m.dual_is_boundary[v]) amin = std::min(amin, m.dual_area[v]);
  for (std::size_t e = 0; e < m.n_e; ++e) {
    lmin = std::min(lmin, m.edge[e].l_e);
    fmax = std::max(fmax, std::abs(sol.f.values[e]));
  }
  sol.data_scale = 2.0 * norm2(b) / (amin * lmin) + fmax;
  return sol;
}

TruncationDiagnostics truncation_diagnostics(const StaggeredMesh2D& m,
                                             const ManufacturedStokes& mf) {
  TruncationDiagnostics td;
  const EdgeField Ru = restrict_velocity(m, mf.psi);
  const DualField cu = curl(m, Ru);
  td.tau_omega = make_dual_field(m);
  for (std::size_t v = 0; v < m.n_v; ++v) {
    td.tau_omega.values[v] = cu.values[v] - mf.omega(m.dual_center[v].x, m.dual_center[v].y);
    if (!m.dual_is_boundary[v])
      td.tau_omega_inf = std::max(td.tau_omega_inf, std::abs(td.tau_omega.values[v]));
  }

  td.tau_p = make_edge_field(m);
  td.tau_f = make_edge_field(m);
  for (std::size_t e = 0; e < m.n_e; ++e) {
    const Edge2D& ed = m.edge[e];
    if (ed.dual1 == kGhost || ed.dual2 == kGhost) continue;
    const Vec2 p1 = m.dual_center[ed.dual1], p2 = m.dual_center[ed.dual2];
    const Vec2 mid = 0.5 * (p1 + p2), half = 0.5 * (p2 - p1);
    const Vec2 n = ed.normal, t = ed.tangent();
    double avg_dpdn = 0.0, avg_fn = 0.0;
    for (int q = 0; q < 5; ++q) {
      const Vec2 x = mid + kGaussX[q] * half;
      avg_dpdn += kGaussW[q] * (mf.grad_p_x(x.x, x.y) * n.x + mf.grad_p_y(x.x, x.y) * n.y);
      const double dpsif_dt = mf.grad_psi_f_x(x.x, x.y) * t.x + mf.grad_psi_f_y(x.x, x.y) * t.y;
      const double dphif_dn = mf.grad_p_x(x.x, x.y) * n.x + mf.grad_p_y(x.x, x.y) * n.y;
      avg_fn += kGaussW[q] * (-dpsif_dt + dphif_dn);
    }
    avg_dpdn *= 0.5;
    avg_fn *= 0.5;
    const Vec2 c1 = m.cell_center[ed.cell1], c2 = m.cell_center[ed.cell2];
    const double diff_p = (mf.p(c2.x, c2.y) - mf.p(c1.x, c1.y)) / ed.d_e;
    td.tau_p.values[e] = avg_dpdn - diff_p;
    const double f_formula =
        -(mf.psi_f(p2.x, p2.y) - mf.psi_f(p1.x, p1.y)) / ed.l_e +
        (mf.phi_f(c2.x, c2.y) - mf.phi_f(c1.x, c1.y)) / ed.d_e;
    td.tau_f.values[e] = avg_fn - f_formula;
    td.tau_p_inf = std::max(td.tau_p_inf, std::abs(td.tau_p.values[e]));
    td.tau_f_inf = std::max(td.tau_f_inf, std::abs(td.tau_f.values[e]));
  }
  return td;
}

}  // namespace stagfv
