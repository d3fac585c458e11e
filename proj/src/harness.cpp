#include "stagfv/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

namespace stagfv {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kS3 = std::sqrt(3.0);
}  // namespace

Manufactured1D case_1d(const std::string& name) {
  if (name == "sinpi") {
    return {"sinpi", [](double x) { return std::sin(kPi * x); },
            [](double x) { return kPi * std::cos(kPi * x); },
            [](double x) { return kPi * kPi * std::sin(kPi * x); }};
  }
  if (name == "poly2") {
    return {"poly2", [](double x) { return x * (1.0 - x); },
            [](double x) { return 1.0 - 2.0 * x; }, [](double) { return 2.0; }};
  }
  throw DegenerateInput("unknown 1D case: " + name);
}

namespace {

// sin^2(pi t) and its first three derivatives
double S0(double t) { return std::sin(kPi * t) * std::sin(kPi * t); }
double S1(double t) { return kPi * std::sin(2.0 * kPi * t); }
double S2(double t) { return 2.0 * kPi * kPi * std::cos(2.0 * kPi * t); }
double S3d(double t) { return -4.0 * kPi * kPi * kPi * std::sin(2.0 * kPi * t); }

Manufactured2D case_sinsq_square() {
  Manufactured2D c;
  c.name = "sinsq";
  auto psi = [](double x, double y) { return S0(x) * S0(y); };
  auto omega = [](double x, double y) { return S2(x) * S0(y) + S0(x) * S2(y); };
  auto p = [](double x, double y) { return std::cos(kPi * x) * std::cos(kPi * y); };
  c.fields.psi = psi;
  c.fields.omega = omega;
  c.fields.p = p;
  c.fields.psi_f = [omega](double x, double y) { return -omega(x, y); };
  c.fields.phi_f = p;
  c.fields.grad_p_x = [](double x, double y) {
    return -kPi * std::sin(kPi * x) * std::cos(kPi * y);
  };
  c.fields.grad_p_y = [](double x, double y) {
    return -kPi * std::cos(kPi * x) * std::sin(kPi * y);
  };
  c.fields.grad_psi_f_x = [](double x, double y) { return -(S3d(x) * S0(y) + S1(x) * S2(y)); };
  c.fields.grad_psi_f_y = [](double x, double y) { return -(S2(x) * S1(y) + S0(x) * S3d(y)); };
  c.u_x = [](double x, double y) { return -S0(x) * S1(y); };  // -psi_y
  c.u_y = [](double x, double y) { return S1(x) * S0(y); };   // psi_x
  return c;
}

// same profile in the oblique coordinates of the unit rhombus
Manufactured2D case_sinsq_rhombus() {
  Manufactured2D c;
  c.name = "sinsq_rhombus";
  auto xi = [](double x, double y) { return x - y / kS3; };
  auto eta = [](double, double y) { return 2.0 * y / kS3; };
  auto psi = [=](double x, double y) { return S0(xi(x, y)) * S0(eta(x, y)); };
  // laplacian in the oblique frame: (4/3)(A''B - A'B' + A B'')
  auto omega = [=](double x, double y) {
    const double a = xi(x, y), b = eta(x, y);
    return (4.0 / 3.0) * (S2(a) * S0(b) - S1(a) * S1(b) + S0(a) * S2(b));
  };
  auto p = [=](double x, double y) {
    return std::cos(kPi * xi(x, y)) * std::cos(kPi * eta(x, y));
  };
  c.fields.psi = psi;
  c.fields.omega = omega;
  c.fields.p = p;
  c.fields.psi_f = [omega](double x, double y) { return -omega(x, y); };
  c.fields.phi_f = p;
  // chain rule: d/dx = d/dxi, d/dy = (2 d/deta - d/dxi)/sqrt(3)
  auto p_xi = [=](double x, double y) {
    return -kPi * std::sin(kPi * xi(x, y)) * std::cos(kPi * eta(x, y));
  };
  auto p_eta = [=](double x, double y) {
    return -kPi * std::cos(kPi * xi(x, y)) * std::sin(kPi * eta(x, y));
  };
  c.fields.grad_p_x = p_xi;
  c.fields.grad_p_y = [=](double x, double y) {
    return (2.0 * p_eta(x, y) - p_xi(x, y)) / kS3;
  };
  auto om_xi = [=](double x, double y) {
    const double a = xi(x, y), b = eta(x, y);
    return (4.0 / 3.0) * (S3d(a) * S0(b) - S2(a) * S1(b) + S1(a) * S2(b));
  };
  auto om_eta = [=](double x, double y) {
    const double a = xi(x, y), b = eta(x, y);
    return (4.0 / 3.0) * (S2(a) * S1(b) - S1(a) * S2(b) + S0(a) * S3d(b));
  };
  c.fields.grad_psi_f_x = [=](double x, double y) { return -om_xi(x, y); };
  c.fields.grad_psi_f_y = [=](double x, double y) {
    return -(2.0 * om_eta(x, y) - om_xi(x, y)) / kS3;
  };
  auto psi_xi = [=](double x, double y) { return S1(xi(x, y)) * S0(eta(x, y)); };
  auto psi_eta = [=](double x, double y) { return S0(xi(x, y)) * S1(eta(x, y)); };
  auto psi_x = psi_xi;
  auto psi_y = [=](double x, double y) { return (2.0 * psi_eta(x, y) - psi_xi(x, y)) / kS3; };
  c.u_x = [=](double x, double y) { return -psi_y(x, y); };
  c.u_y = [=](double x, double y) { return psi_x(x, y); };
  return c;
}

}  // namespace

Manufactured2D case_2d(const std::string& name) {
  if (name == "sinsq") return case_sinsq_square();
  if (name == "sinsq_rhombus") return case_sinsq_rhombus();
  throw DegenerateInput("unknown 2D case: " + name);
}

Manufactured2D pick_case_2d(const std::string& base_name, MeshFamily2D::Kind kind) {
  if (base_name == "sinsq" && kind == MeshFamily2D::TriHex) return case_2d("sinsq_rhombus");
  return case_2d(base_name);
}

StaggeredMesh2D build_mesh_2d(const MeshFamily2D& fam, std::size_t n) {
  switch (fam.kind) {
    case MeshFamily2D::Rect:
      return gen_rect(n, n);
    case MeshFamily2D::Perturbed:
      return gen_perturbed(n, n, fam.amplitude, fam.seed);
    case MeshFamily2D::TriHex:
      return gen_tri_hex(n);
  }
  throw DegenerateInput("unknown 2D mesh family");
}

double fit_rate(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw DegenerateInput("fit_rate needs at least 3 (h, error) pairs");
  double emax = 0.0;
  for (const auto& [h, e] : pairs) {
    if (!(h > 0.0)) throw DegenerateInput("fit_rate needs positive h");
    emax = std::max(emax, e);
  }
  // errors at roundoff level carry no rate information
  if (emax <= 1e-11) return std::numeric_limits<double>::infinity();
  for (const auto& [h, e] : pairs)
    if (e <= 1e-14 * emax || e <= 0.0) return std::numeric_limits<double>::infinity();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pairs.size());
  for (const auto& [h, e] : pairs) {
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceReport run_1d_study(const Manufactured1D& mcase, const MeshFamily1D& fam,
                               const std::vector<std::size_t>& levels) {
  ConvergenceReport rep;
  rep.case_name = mcase.name;
  rep.family = fam.kind == MeshFamily1D::Uniform ? "uniform"
               : fam.kind == MeshFamily1D::Random ? "random"
                                                  : "random-midpoint";
  for (std::size_t N : levels) {
    const auto t0 = std::chrono::steady_clock::now();
    Mesh1D mesh;
    if (fam.kind == MeshFamily1D::Uniform)
      mesh = gen_uniform(N);
    else
      mesh = gen_random(N, fam.ratio, fam.seed,
                        fam.kind == MeshFamily1D::RandomMidpoint ? CenterRule::Midpoint
                                                                 : CenterRule::Random);
    const Elliptic1DSolution sol = assemble_and_solve(mesh, mcase.f);
    Grid1DField err = sol.u_h;
    const Grid1DField ru = restrict_primal(mesh, mcase.u);
    for (std::size_t i = 0; i < mesh.N; ++i) err.values[i] -= ru.values[i];
    const Norms1D ns = norms(mesh, err);
    const Grid1DField tau = flux_truncation(mesh, mcase.u, mcase.u_x);
    double tau_inf = 0.0;
    for (std::size_t i = 1; i < mesh.N; ++i)  // interior faces
      tau_inf = std::max(tau_inf, std::abs(tau.values[i]));
    LevelRecord rec;
    rec.n = N;
    rec.n_dof = N;
    rec.h = mesh.h_max();
    rec.err_l2 = ns.l2;
    rec.err_h1 = ns.h1;
    rec.tau_f = tau_inf;
    rec.cg_iters = sol.solve_report.iterations;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.levels.push_back(rec);
  }
  std::vector<std::pair<double, double>> pl, ph;
  for (const auto& r : rep.levels) {
    pl.emplace_back(r.h, r.err_l2);
    ph.emplace_back(r.h, r.err_h1);
  }
  rep.rate_l2 = fit_rate(pl);
  rep.rate_h1 = fit_rate(ph);
  return rep;
}

Errors2D stokes_errors(const StaggeredMesh2D& m, const StokesSolution& sol,
                       const Manufactured2D& mcase) {
  const EdgeField ru = restrict_velocity(m, mcase.fields.psi);
  EdgeField w = make_edge_field(m, true);
  for (std::size_t e = 0; e < m.n_edges_total(); ++e)
    w.values[e] = sol.u.values[e] - ru.values[e];
  const DualField cw = curl(m, w);
  Errors2D out;
  out.l2 = std::sqrt(inner_edge(m, w, w));
  out.h1 = std::sqrt(inner_dual_interior(m, cw, cw));
  return out;
}

ConvergenceReport run_2d_study(const Manufactured2D& mcase, const MeshFamily2D& fam,
                               const std::vector<std::size_t>& levels, double tol,
                               bool with_truncation) {
  ConvergenceReport rep;
  rep.case_name = mcase.name;
  rep.family = fam.kind == MeshFamily2D::Rect ? "rect"
               : fam.kind == MeshFamily2D::Perturbed ? "perturbed"
                                                     : "trihex";
  for (std::size_t n : levels) {
    const auto t0 = std::chrono::steady_clock::now();
    const StaggeredMesh2D mesh = build_mesh_2d(fam, n);
    const StokesSolution sol = solve_stokes(mesh, mcase.fields.psi_f, mcase.fields.phi_f, tol);
    // re-assert the structural solve invariants at every level
    const CellField dv = div(mesh, sol.u);
    for (std::size_t i = 0; i < mesh.n_c; ++i)
      if (std::abs(dv.values[i]) * mesh.cell_area[i] > 1e-11)
        throw InvariantViolation("2D study: interior divergence nonzero");
    for (std::size_t e = mesh.n_e; e < mesh.n_edges_total(); ++e)
      if (sol.u.values[e] != 0.0)
        throw InvariantViolation("2D study: boundary edge carries flow");
    const Errors2D err = stokes_errors(mesh, sol, mcase);
    LevelRecord rec;
    rec.n = n;
    rec.n_dof = mesh.n_v_interior();
    rec.h = mesh.h;
    rec.err_l2 = err.l2;
    rec.err_h1 = err.h1;
    if (with_truncation) {
      const TruncationDiagnostics td = truncation_diagnostics(mesh, mcase.fields);
      rec.tau_p = td.tau_p_inf;
      rec.tau_f = td.tau_f_inf;
      rec.tau_omega = td.tau_omega_inf;
    }
    rec.cg_iters = sol.solve_report.iterations;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.levels.push_back(rec);
  }
  std::vector<std::pair<double, double>> pl, ph, pp, pf, po;
  for (const auto& r : rep.levels) {
    pl.emplace_back(r.h, r.err_l2);
    ph.emplace_back(r.h, r.err_h1);
    if (with_truncation) {
      pp.emplace_back(r.h, r.tau_p);
      pf.emplace_back(r.h, r.tau_f);
      po.emplace_back(r.h, r.tau_omega);
    }
  }
  rep.rate_l2 = fit_rate(pl);
  rep.rate_h1 = fit_rate(ph);
  if (with_truncation) {
    rep.rate_tau_p = fit_rate(pp);
    rep.rate_tau_f = fit_rate(pf);
    rep.rate_tau_omega = fit_rate(po);
  }
  return rep;
}

void ConvergenceReport::write_csv(std::ostream& out) const {
  out.precision(17);
  out << "level,h,n_dof,err_l2,err_h1,tau_p,tau_f,tau_omega,cg_iters,seconds\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const LevelRecord& r = levels[k];
    out << k << "," << r.h << "," << r.n_dof << "," << r.err_l2 << "," << r.err_h1 << ","
        << r.tau_p << "," << r.tau_f << "," << r.tau_omega << "," << r.cg_iters << ","
        << r.seconds << "\n";
  }
  out << "# case=" << case_name << " family=" << family << "\n";
  out << "# rate_l2=" << rate_l2 << " rate_h1=" << rate_h1;
  if (rate_tau_p) out << " rate_tau_p=" << *rate_tau_p;
  if (rate_tau_f) out << " rate_tau_f=" << *rate_tau_f;
  if (rate_tau_omega) out << " rate_tau_omega=" << *rate_tau_omega;
  out << "\n";
}

void ConvergenceReport::write_loglog(std::ostream& out, const std::string& norm) const {
  out.precision(17);
  for (const LevelRecord& r : levels)
    out << r.h << " " << (norm == "l2" ? r.err_l2 : r.err_h1) << "\n";
}

std::vector<std::size_t> default_levels_1d() { return {16, 32, 64, 128, 256, 512}; }

std::vector<std::size_t> default_levels_2d(MeshFamily2D::Kind kind) {
  if (kind == MeshFamily2D::TriHex) return {8, 16, 32, 64};
  return {9, 17, 33, 65};
}

}  // namespace stagfv
