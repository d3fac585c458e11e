#ifndef STAGFV_HARNESS_HPP
#define STAGFV_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stagfv/elliptic1d.hpp"
#include "stagfv/stokes2d.hpp"

namespace stagfv {

struct Manufactured1D {
  std::string name;
  ScalarFn u, u_x, f;
};

struct Manufactured2D {
  std::string name;
  ManufacturedStokes fields;
  // velocity components for edge restriction oracles
  ScalarFn2 u_x, u_y;
};

/// Named manufactured cases. 1D: "sinpi", "poly2". 2D: "sinsq" on the unit
/// square and "sinsq_rhombus" on the tri-hex rhombus; pick_case_2d maps a
/// family to the matching domain variant of the same functional form.
Manufactured1D case_1d(const std::string& name);
Manufactured2D case_2d(const std::string& name);

struct MeshFamily1D {
  enum Kind { Uniform, Random, RandomMidpoint } kind = Uniform;
  double ratio = 3.0;
  std::uint64_t seed = 7;
};

struct MeshFamily2D {
  enum Kind { Rect, Perturbed, TriHex } kind = Rect;
  double amplitude = 0.1;
  std::uint64_t seed = 3;
};

Manufactured2D pick_case_2d(const std::string& base_name, MeshFamily2D::Kind kind);
StaggeredMesh2D build_mesh_2d(const MeshFamily2D& fam, std::size_t n);

struct LevelRecord {
  std::size_t n = 0;      // resolution parameter
  std::size_t n_dof = 0;  // unknowns solved for
  double h = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  double tau_p = 0.0, tau_f = 0.0, tau_omega = 0.0;
  int cg_iters = 0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string case_name;
  std::string family;
  std::vector<LevelRecord> levels;  // strictly decreasing h
  double rate_l2 = 0.0;
  double rate_h1 = 0.0;
  std::optional<double> rate_tau_p, rate_tau_f, rate_tau_omega;

  void write_csv(std::ostream& out) const;
  void write_loglog(std::ostream& out, const std::string& norm) const;  // "l2" or "h1"
};

/// Least-squares slope of log(err) against log(h). Errors at or below
/// 1e-14 * max short-circuit to +infinity (exact to roundoff).
double fit_rate(const std::vector<std::pair<double, double>>& pairs);

ConvergenceReport run_1d_study(const Manufactured1D& mcase, const MeshFamily1D& fam,
                               const std::vector<std::size_t>& levels);

ConvergenceReport run_2d_study(const Manufactured2D& mcase, const MeshFamily2D& fam,
                               const std::vector<std::size_t>& levels, double tol = 1e-12,
                               bool with_truncation = true);

/// Errors of one 2D solve against the exact fields: the edge L2 norm of
/// u_h - R_h u and the discrete H1 norm |curl(u_h - R_h u)|_0 over trusted
/// dual cells.
struct Errors2D {
  double l2 = 0.0, h1 = 0.0;
};
Errors2D stokes_errors(const StaggeredMesh2D& m, const StokesSolution& sol,
                       const Manufactured2D& mcase);

/// Default resolutions used by the studies and the acceptance run.
std::vector<std::size_t> default_levels_1d();
std::vector<std::size_t> default_levels_2d(MeshFamily2D::Kind kind);

}  // namespace stagfv

#endif
