#ifndef STAGFV_MESH2D_HPP
#define STAGFV_MESH2D_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stagfv/errors.hpp"

namespace stagfv {

struct Vec2 {
  double x = 0.0, y = 0.0;
};
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }  // k x a

constexpr int kGhost = -1;

/// One staggered edge pair: the primary-cell edge (length l_e) and the dual
/// edge crossing it (length d_e, between the two primary centers). The unit
/// normal points from cell1 to cell2; the tangent k x n from dual1 to dual2.
/// Ghost entries (-1) stand for the mirror image across the domain boundary.
struct Edge2D {
  int cell1 = kGhost, cell2 = kGhost;
  int dual1 = kGhost, dual2 = kGhost;
  Vec2 normal;
  double l_e = 0.0, d_e = 0.0;
  Vec2 crossing;
  double bisection_offset = 0.0;

  Vec2 tangent() const { return perp(normal); }
  double diamond_area() const { return 0.5 * l_e * d_e; }
  int cell_sign(int i) const { return i == cell1 ? +1 : -1; }  // n_{e,i}
  int dual_sign(int v) const { return v == dual1 ? +1 : -1; }  // t_{e,v}
};

struct StaggeredMesh2D {
  // cells: interior [0, n_c), boundary [n_c, n_c + n_cb)
  std::size_t n_c = 0, n_cb = 0;
  // duals: interior first, boundary-flagged last
  std::size_t n_v = 0;
  // edges: interior [0, n_e), boundary [n_e, n_e + n_eb)
  std::size_t n_e = 0, n_eb = 0;

  std::vector<Vec2> cell_center;
  std::vector<double> cell_area;
  std::vector<Vec2> dual_center;
  std::vector<double> dual_area;
  std::vector<std::uint8_t> dual_is_boundary;
  std::vector<Edge2D> edge;

  std::vector<std::vector<int>> EC;  // edges around a cell, ccw
  std::vector<std::vector<int>> VC;  // duals around a cell, ccw
  std::vector<std::vector<int>> CV;  // cells around a dual, ccw
  std::vector<std::vector<int>> EV;  // edges around a dual, ccw

  double h = 0.0;        // nominal resolution
  double m_const = 0.0;  // min(l_e, d_e)/h over edges
  double M_const = 0.0;  // max(l_e, d_e)/h
  double domain_area = 0.0;

  std::size_t n_cells() const { return n_c + n_cb; }
  std::size_t n_edges_total() const { return n_e + n_eb; }
  bool edge_is_boundary(std::size_t e) const { return e >= n_e; }
  bool cell_is_boundary(std::size_t i) const { return i >= n_c; }
  std::size_t n_v_interior() const;

  void finalize();  // derives connectivity, constants, cyclic orders
};

StaggeredMesh2D gen_rect(std::size_t nx, std::size_t ny);

/// Smoothly stretched tensor mesh: interior center coordinates displaced by
/// amplitude * h * s(.) with a fixed smooth field selected by the seed (the
/// same field in both axes), faces rebuilt as perpendicular bisectors.
StaggeredMesh2D gen_perturbed(std::size_t nx, std::size_t ny, double amplitude,
                              std::uint64_t seed);

/// Equilateral-triangle primary cells with hexagonal dual cells on a unit
/// rhombus; the dual cells on the boundary are clipped and their centers
/// (the lattice vertices) lie on the domain boundary.
StaggeredMesh2D gen_tri_hex(std::size_t n);

struct QualityCheck {
  std::string name;
  bool pass = true;
  long worst_element = -1;
  double magnitude = 0.0;
  std::string detail;
};

struct MeshQualityReport {
  std::vector<QualityCheck> checks;
  bool all_pass() const;
  const QualityCheck* find(const std::string& name) const;
};

/// Runs every structural and geometric invariant; bisection_c is the
/// constant in the offset <= c*h^2 near-bisection threshold.
MeshQualityReport validate(const StaggeredMesh2D& m, double bisection_c = 2.0);

void save(const StaggeredMesh2D& m, std::ostream& out);
StaggeredMesh2D load_mesh2d(std::istream& in, bool force = false);

}  // namespace stagfv

#endif
