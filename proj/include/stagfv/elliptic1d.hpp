#ifndef STAGFV_ELLIPTIC1D_HPP
#define STAGFV_ELLIPTIC1D_HPP

#include <functional>

#include "stagfv/linalg.hpp"
#include "stagfv/mesh1d.hpp"

namespace stagfv {

using ScalarFn = std::function<double(double)>;

/// Forward difference of a primary field onto the dual mesh, with the
/// homogeneous Dirichlet ghost convention u_0 = u_{N+1} = 0.
Grid1DField grad_primal(const Mesh1D& m, const Grid1DField& u);

/// Backward difference of a dual field onto the primary mesh.
Grid1DField grad_dual(const Mesh1D& m, const Grid1DField& v);

/// Length-weighted inner product of two fields of the same kind.
double inner(const Mesh1D& m, const Grid1DField& a, const Grid1DField& b);

Grid1DField restrict_primal(const Mesh1D& m, const ScalarFn& u);
Grid1DField restrict_dual(const Mesh1D& m, const ScalarFn& w);

/// Flux consistency defect: restrict_dual(u_x) - grad_primal(restrict_primal(u)).
Grid1DField flux_truncation(const Mesh1D& m, const ScalarFn& u, const ScalarFn& u_x);

struct Norms1D {
  double l2 = 0.0;
  double h1 = 0.0;
};
Norms1D norms(const Mesh1D& m, const Grid1DField& u);

struct Elliptic1DSolution {
  Grid1DField u_h;
  Grid1DField f_h;
  SolveReport solve_report;
};

/// Cell averages of f by 5-point Gauss-Legendre per cell.
Grid1DField cell_averages(const Mesh1D& m, const ScalarFn& f);

/// Assembles the staggered scheme for -u_xx = f with homogeneous Dirichlet
/// data, rows scaled by the cell length so the matrix is symmetric.
/// Bands are returned for the direct solve; the same system as a SparseSpd
/// comes from assemble_matrix.
struct Tridiag {
  std::vector<double> lower, diag, upper;
};
Tridiag assemble_scheme(const Mesh1D& m);
SparseSpd assemble_matrix(const Mesh1D& m);

Elliptic1DSolution assemble_and_solve(const Mesh1D& m, const Grid1DField& f);
Elliptic1DSolution assemble_and_solve(const Mesh1D& m, const ScalarFn& f);

}  // namespace stagfv

#endif
