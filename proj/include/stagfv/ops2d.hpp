#ifndef STAGFV_OPS2D_HPP
#define STAGFV_OPS2D_HPP

#include <functional>

#include "stagfv/mesh2d.hpp"

namespace stagfv {

using ScalarFn2 = std::function<double(double, double)>;

struct CellField {
  std::vector<double> values;  // all primary cells, interior first
};

/// Values on dual cells. `dirichlet` marks fields that vanish on boundary
/// dual cells (streamfunction class).
struct DualField {
  std::vector<double> values;
  bool dirichlet = false;
};

/// Normal components u.n_e on all edge pairs. `interior` marks fields that
/// vanish on boundary edge pairs (members of the discrete velocity space).
struct EdgeField {
  std::vector<double> values;
  bool interior = false;
};

struct ProlongedPair {
  DualField psi;
  DualField omega;
};

CellField make_cell_field(const StaggeredMesh2D& m);
DualField make_dual_field(const StaggeredMesh2D& m, bool dirichlet = false);
EdgeField make_edge_field(const StaggeredMesh2D& m, bool interior = false);

/// [div u]_i = (1/|A_i|) sum_{e in EC(i)} n_{e,i} u_e l_e
CellField div(const StaggeredMesh2D& m, const EdgeField& u);

/// Circulation per unit area around each dual cell. Values at boundary dual
/// cells are computed but untrusted (their cells are clipped by the wall).
DualField curl(const StaggeredMesh2D& m, const EdgeField& u);

/// [grad phi]_e = (phi_{i2} - phi_{i1}) / d_e; zero on wall faces without a
/// second cell.
EdgeField grad_cell(const StaggeredMesh2D& m, const CellField& phi);

/// [perp psi]_e = -(psi_{nu2} - psi_{nu1}) / l_e on interior pairs. Boundary
/// pairs evaluate through their boundary duals (zero for dirichlet fields)
/// and through ghost zeros where a dual is mirrored outside.
EdgeField perp_grad_dual(const StaggeredMesh2D& m, const DualField& psi);

double inner_edge(const StaggeredMesh2D& m, const EdgeField& u, const EdgeField& v);
double inner_cell(const StaggeredMesh2D& m, const CellField& a, const CellField& b);
double inner_dual(const StaggeredMesh2D& m, const DualField& a, const DualField& b);
/// Same sum restricted to interior (trusted) dual cells.
double inner_dual_interior(const StaggeredMesh2D& m, const DualField& a, const DualField& b);

/// Point samples at dual centers with zeros on boundary duals.
DualField sample_streamfunction(const StaggeredMesh2D& m, const ScalarFn2& psi);
/// Point samples at cell centers.
CellField sample_cells(const StaggeredMesh2D& m, const ScalarFn2& f);
/// Point samples at all dual centers (no boundary zeroing).
DualField sample_duals(const StaggeredMesh2D& m, const ScalarFn2& f);
/// Normal components of a vector field sampled at the edge crossings.
EdgeField sample_edges(const StaggeredMesh2D& m, const ScalarFn2& vx, const ScalarFn2& vy);

/// Discrete representative of u = perp grad psi: sample the streamfunction
/// (boundary zeros), then take the discrete skew gradient.
EdgeField restrict_velocity(const StaggeredMesh2D& m, const ScalarFn2& psi);

/// Maps a discrete velocity with its representing streamfunction to the
/// (streamfunction, vorticity) pair. Throws RepresentationMismatch when
/// u != perp_grad_dual(psi) beyond 1e-10.
ProlongedPair prolong(const StaggeredMesh2D& m, const EdgeField& u, const DualField& psi);

struct ForcingDiscretization {
  EdgeField f;       // perp(psi_f) + grad(phi_f)
  DualField psi_f;   // stream potential at dual centers
  CellField phi_f;   // scalar potential at cell centers
};

/// Discretizes f = perp grad psi_f + grad phi_f through its two potentials,
/// sampled at the dual / primary centers.
ForcingDiscretization discretize_forcing(const StaggeredMesh2D& m, const ScalarFn2& psi_f,
                                         const ScalarFn2& phi_f);

// text dump: header "field <kind> <count>" then one value per line
void save_field(const CellField& f, std::ostream& out);
void save_field(const DualField& f, std::ostream& out);
void save_field(const EdgeField& f, std::ostream& out);
std::pair<std::string, std::vector<double>> load_field(std::istream& in);

}  // namespace stagfv

#endif
