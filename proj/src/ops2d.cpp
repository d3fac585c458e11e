#include "stagfv/ops2d.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "stagfv/errors.hpp"

namespace stagfv {

CellField make_cell_field(const StaggeredMesh2D& m) {
  return {std::vector<double>(m.n_cells(), 0.0)};
}
DualField make_dual_field(const StaggeredMesh2D& m, bool dirichlet) {
  return {std::vector<double>(m.n_v, 0.0), dirichlet};
}
EdgeField make_edge_field(const StaggeredMesh2D& m, bool interior) {
  return {std::vector<double>(m.n_edges_total(), 0.0), interior};
}

CellField div(const StaggeredMesh2D& m, const EdgeField& u) {
  CellField d = make_cell_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    const double flux = u.values[e] * ed.l_e;
    if (ed.cell1 != kGhost) d.values[ed.cell1] += flux;
    if (ed.cell2 != kGhost) d.values[ed.cell2] -= flux;
  }
  for (std::size_t i = 0; i < m.n_cells(); ++i) d.values[i] /= m.cell_area[i];
  return d;
}

DualField curl(const StaggeredMesh2D& m, const EdgeField& u) {
  DualField w = make_dual_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    const double circ = u.values[e] * ed.d_e;
    // the dual edge runs along n_e; traversing counterclockwise around the
    // dual cell the sign is -t_{e,nu}
    if (ed.dual1 != kGhost) w.values[ed.dual1] -= circ;
    if (ed.dual2 != kGhost) w.values[ed.dual2] += circ;
  }
  for (std::size_t v = 0; v < m.n_v; ++v) w.values[v] /= m.dual_area[v];
  return w;
}

EdgeField grad_cell(const StaggeredMesh2D& m, const CellField& phi) {
  EdgeField g = make_edge_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    if (ed.cell1 == kGhost || ed.cell2 == kGhost) continue;  // wall face
    g.values[e] = (phi.values[ed.cell2] - phi.values[ed.cell1]) / ed.d_e;
  }
  return g;
}

EdgeField perp_grad_dual(const StaggeredMesh2D& m, const DualField& psi) {
  EdgeField u = make_edge_field(m, psi.dirichlet);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    if (m.edge_is_boundary(e)) {
      if (ed.dual1 == kGhost || ed.dual2 == kGhost) continue;  // mirrored dual: value 0
      // both duals lie on the boundary; zero for dirichlet fields
      u.values[e] = -(psi.values[ed.dual2] - psi.values[ed.dual1]) / ed.l_e;
      continue;
    }
    const double p1 = ed.dual1 != kGhost ? psi.values[ed.dual1] : 0.0;
    const double p2 = ed.dual2 != kGhost ? psi.values[ed.dual2] : 0.0;
    u.values[e] = -(p2 - p1) / ed.l_e;
  }
  return u;
}

double inner_edge(const StaggeredMesh2D& m, const EdgeField& u, const EdgeField& v) {
  double s = 0.0;
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    s += u.values[e] * v.values[e] * m.edge[e].diamond_area();
  return s;
}

double inner_cell(const StaggeredMesh2D& m, const CellField& a, const CellField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.n_cells(); ++i) s += a.values[i] * b.values[i] * m.cell_area[i];
  return s;
}

double inner_dual(const StaggeredMesh2D& m, const DualField& a, const DualField& b) {
  double s = 0.0;
  for (std::size_t v = 0; v < m.n_v; ++v) s += a.values[v] * b.values[v] * m.dual_area[v];
  return s;
}

double inner_dual_interior(const StaggeredMesh2D& m, const DualField& a, const DualField& b) {
  double s = 0.0;
  for (std::size_t v = 0; v < m.n_v; ++v)
    if (!m.dual_is_boundary[v]) s += a.values[v] * b.values[v] * m.dual_area[v];
  return s;
}

DualField sample_streamfunction(const StaggeredMesh2D& m, const ScalarFn2& psi) {
  DualField p = make_dual_field(m, true);
  for (std::size_t v = 0; v < m.n_v; ++v)
    p.values[v] = m.dual_is_boundary[v] ? 0.0 : psi(m.dual_center[v].x, m.dual_center[v].y);
  return p;
}

CellField sample_cells(const StaggeredMesh2D& m, const ScalarFn2& f) {
  CellField c = make_cell_field(m);
  for (std::size_t i = 0; i < m.n_cells(); ++i)
    c.values[i] = f(m.cell_center[i].x, m.cell_center[i].y);
  return c;
}

DualField sample_duals(const StaggeredMesh2D& m, const ScalarFn2& f) {
  DualField p = make_dual_field(m);
  for (std::size_t v = 0; v < m.n_v; ++v) p.values[v] = f(m.dual_center[v].x, m.dual_center[v].y);
  return p;
}

EdgeField sample_edges(const StaggeredMesh2D& m, const ScalarFn2& vx, const ScalarFn2& vy) {
  EdgeField u = make_edge_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
    const Edge2D& ed = m.edge[e];
    const Vec2 xc = ed.crossing;
    u.values[e] = vx(xc.x, xc.y) * ed.normal.x + vy(xc.x, xc.y) * ed.normal.y;
  }
  return u;
}

EdgeField restrict_velocity(const StaggeredMesh2D& m, const ScalarFn2& psi) {
  return perp_grad_dual(m, sample_streamfunction(m, psi));
}

ProlongedPair prolong(const StaggeredMesh2D& m, const EdgeField& u, const DualField& psi) {
  const EdgeField rep = perp_grad_dual(m, psi);
  double err = 0.0;
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    err = std::max(err, std::abs(u.values[e] - rep.values[e]));
  if (err > 1e-10)
    throw RepresentationMismatch("prolong: velocity is not the skew gradient of psi (max |diff| = " +
                                 std::to_string(err) + ")");
  return {psi, curl(m, u)};
}

ForcingDiscretization discretize_forcing(const StaggeredMesh2D& m, const ScalarFn2& psi_f,
                                         const ScalarFn2& phi_f) {
  ForcingDiscretization out;
  out.psi_f = sample_duals(m, psi_f);
  out.phi_f = sample_cells(m, phi_f);
  const EdgeField a = perp_grad_dual(m, out.psi_f);
  const EdgeField b = grad_cell(m, out.phi_f);
  out.f = make_edge_field(m);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    out.f.values[e] = a.values[e] + b.values[e];
  return out;
}

namespace {

void write_values(const char* kind, const std::vector<double>& vals, std::ostream& out) {
  out << "field " << kind << " " << vals.size() << "\n";
  out.precision(17);
  for (double v : vals) out << v << "\n";
}

}  // namespace

void save_field(const CellField& f, std::ostream& out) { write_values("cell", f.values, out); }
void save_field(const DualField& f, std::ostream& out) { write_values("dual", f.values, out); }
void save_field(const EdgeField& f, std::ostream& out) { write_values("edge", f.values, out); }

std::pair<std::string, std::vector<double>> load_field(std::istream& in) {
  std::string tag, kind;
  std::size_t count = 0;
  if (!(in >> tag >> kind >> count) || tag != "field")
    throw ParseError("expected 'field <kind> <count>' header", 1);
  std::vector<double> vals(count);
  for (std::size_t i = 0; i < count; ++i)
    if (!(in >> vals[i])) throw ParseError("truncated field values", static_cast<long>(i + 2));
  return {kind, vals};
}

}  // namespace stagfv
