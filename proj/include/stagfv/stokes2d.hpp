#ifndef STAGFV_STOKES2D_HPP
#define STAGFV_STOKES2D_HPP

#include "stagfv/linalg.hpp"
#include "stagfv/ops2d.hpp"

namespace stagfv {

/// Discrete vorticity Poisson operator: the matrix of -curl(perp_grad(.))
/// over interior dual cells, rows scaled by |A_nu| so it is symmetric.
/// Boundary dual cells enter through Dirichlet elimination; on meshes
/// without boundary duals the operator has the constants in its kernel and
/// the first interior dual is pinned to fix the gauge.
struct VertexLaplacian {
  SparseSpd A;
  std::vector<int> dof_of_dual;   // -1 for boundary / pinned duals
  std::vector<int> dual_of_dof;
  bool gauge_pinned = false;
};

VertexLaplacian assemble_vertex_laplacian(const StaggeredMesh2D& m);

struct StokesSolution {
  DualField psi;    // dirichlet streamfunction
  EdgeField u;      // interior velocity (normal components)
  DualField omega;  // curl(u); interior duals trusted
  CellField p;      // mean-zero pressure
  DualField psi_f;  // compatibility-projected forcing potential actually used
  CellField phi_f;
  EdgeField f;
  SolveReport solve_report;
  double momentum_residual_inf = 0.0;
  double data_scale = 0.0;  // bound scale for the residual check
};

/// Solves the staggered Stokes scheme through the streamfunction reduction:
/// the vertex Poisson problem for psi, u = perp_grad(psi), omega = curl(u),
/// pressure recovered as the mean-zero scalar potential of the forcing.
StokesSolution solve_stokes(const StaggeredMesh2D& m, const ScalarFn2& psi_f,
                            const ScalarFn2& phi_f, double tol = 1e-12, int max_iter = -1);

/// a_h(u, v) over trusted (interior) dual cells.
double a_h(const StaggeredMesh2D& m, const EdgeField& u, const EdgeField& v);

struct ManufacturedStokes {
  ScalarFn2 psi;       // streamfunction of the exact velocity
  ScalarFn2 omega;     // its Laplacian
  ScalarFn2 p;         // exact pressure
  ScalarFn2 psi_f;     // forcing stream potential (= -omega)
  ScalarFn2 phi_f;     // forcing scalar potential (= p)
  ScalarFn2 grad_p_x, grad_p_y;
  ScalarFn2 grad_psi_f_x, grad_psi_f_y;
};

struct TruncationDiagnostics {
  DualField tau_omega;  // curl(R_h u) - omega(x_nu), interior duals trusted
  EdgeField tau_p;      // interior pairs
  EdgeField tau_f;
  double tau_omega_inf = 0.0;  // over interior duals
  double tau_p_inf = 0.0;      // over interior pairs
  double tau_f_inf = 0.0;
};

TruncationDiagnostics truncation_diagnostics(const StaggeredMesh2D& m,
                                             const ManufacturedStokes& mf);

}  // namespace stagfv

#endif
