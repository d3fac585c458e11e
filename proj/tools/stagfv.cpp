// Command-line front end: mesh generation and inspection, single solves,
// convergence studies, and the exact-identity suite.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "stagfv/harness.hpp"
#include "stagfv/rng.hpp"

namespace fs = std::filesystem;
using namespace stagfv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct Options {
  std::size_t n = 8, nx = 0, ny = 0;
  double ratio = 3.0;
  double amplitude = 0.1;
  std::uint64_t seed = 7;
  std::vector<std::size_t> levels;
  double tol = 1e-12;
  std::string out_dir;
  std::string mesh = "uniform";
  std::string case_name = "sinpi";
  bool force = false;
};

fs::path out_dir(const Options& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv("STAGFV_OUT")) return env;
  return ".";
}

StaggeredMesh2D make_mesh2d(const Options& o) {
  const std::size_t nx = o.nx ? o.nx : o.n, ny = o.ny ? o.ny : o.n;
  if (o.mesh == "rect") return gen_rect(nx, ny);
  if (o.mesh == "perturbed") return gen_perturbed(nx, ny, o.amplitude, o.seed);
  if (o.mesh == "trihex") return gen_tri_hex(o.n);
  if (o.mesh.rfind("file:", 0) == 0) {
    std::ifstream in(o.mesh.substr(5));
    if (!in) throw std::runtime_error("cannot open mesh file " + o.mesh.substr(5));
    return load_mesh2d(in, o.force);
  }
  throw std::invalid_argument("unknown 2D mesh family: " + o.mesh);
}

MeshFamily2D family_of(const Options& o) {
  MeshFamily2D fam;
  fam.amplitude = o.amplitude;
  fam.seed = o.seed;
  if (o.mesh == "rect") fam.kind = MeshFamily2D::Rect;
  else if (o.mesh == "perturbed") fam.kind = MeshFamily2D::Perturbed;
  else if (o.mesh == "trihex") fam.kind = MeshFamily2D::TriHex;
  else throw std::invalid_argument("convergence studies need a generated mesh family");
  return fam;
}

void print_report(const MeshQualityReport& rep, std::ostream& os) {
  for (const auto& c : rep.checks) {
    os << (c.name == "euler" ? "Euler " + c.detail : c.name) << " "
       << (c.pass ? "OK" : "FAIL");
    if (!c.pass && c.worst_element >= 0)
      os << " (worst element " << c.worst_element << ", magnitude " << c.magnitude << ")";
    if (!c.pass && !c.detail.empty() && c.name != "euler") os << " [" << c.detail << "]";
    os << "\n";
  }
}

int cmd_mesh_gen(const Options& o, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot open " << path << " for writing\n";
    return kExitValidation;
  }
  if (o.mesh == "uniform" || o.mesh == "random" || o.mesh == "random-midpoint") {
    Mesh1D m = o.mesh == "uniform"
                   ? gen_uniform(o.n)
                   : gen_random(o.n, o.ratio, o.seed,
                                o.mesh == "random-midpoint" ? CenterRule::Midpoint
                                                            : CenterRule::Random);
    save(m, out);
  } else {
    save(make_mesh2d(o), out);
  }
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

int cmd_mesh_check(const Options& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return kExitValidation;
  }
  std::string head;
  in >> head;
  in.seekg(0);
  if (head == "mesh1d") {
    const Mesh1D m = load_mesh1d(in);
    const auto violations = validate(m);
    if (violations.empty()) {
      std::cout << "mesh1d N=" << m.N << " OK (ratio witness " << m.ratio_witness() << ")\n";
      return kExitOk;
    }
    for (const auto& v : violations) std::cout << v << "\n";
    return kExitValidation;
  }
  const StaggeredMesh2D m = load_mesh2d(in, /*force=*/true);
  const MeshQualityReport rep = validate(m);
  print_report(rep, std::cout);
  return rep.all_pass() || o.force ? kExitOk : kExitValidation;
}

int cmd_mesh_info(const Options& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return kExitValidation;
  }
  std::string head;
  in >> head;
  in.seekg(0);
  if (head == "mesh1d") {
    const Mesh1D m = load_mesh1d(in);
    std::cout << "mesh1d N=" << m.N << " h_min=" << m.h_min() << " h_max=" << m.h_max()
              << " ratio=" << m.ratio_witness() << "\n";
    return kExitOk;
  }
  const StaggeredMesh2D m = load_mesh2d(in, o.force);
  std::cout << "mesh2d cells=" << m.n_c << "+" << m.n_cb << " duals=" << m.n_v
            << " (interior " << m.n_v_interior() << ") edges=" << m.n_e << "+" << m.n_eb
            << " h=" << m.h << " m=" << m.m_const << " M=" << m.M_const << "\n";
  return kExitOk;
}

int cmd_solve1d(const Options& o) {
  const Manufactured1D mc = case_1d(o.case_name);
  Mesh1D mesh;
  if (o.mesh.rfind("file:", 0) == 0) {
    std::ifstream in(o.mesh.substr(5));
    if (!in) throw std::runtime_error("cannot open mesh file " + o.mesh.substr(5));
    mesh = load_mesh1d(in);
    const auto violations = validate(mesh);
    if (!violations.empty() && !o.force)
      throw InvariantViolation("loaded mesh fails validation: " + violations.front());
  } else if (o.mesh == "uniform") {
    mesh = gen_uniform(o.n);
  } else {
    mesh = gen_random(o.n, o.ratio, o.seed,
                      o.mesh == "random-midpoint" ? CenterRule::Midpoint : CenterRule::Random);
  }
  const Elliptic1DSolution sol = assemble_and_solve(mesh, mc.f);
  Grid1DField err = sol.u_h;
  const Grid1DField ru = restrict_primal(mesh, mc.u);
  for (std::size_t i = 0; i < mesh.N; ++i) err.values[i] -= ru.values[i];
  const Norms1D ns = norms(mesh, err);
  std::cout.precision(12);
  std::cout << "N=" << mesh.N << " err_l2=" << ns.l2 << " err_h1=" << ns.h1 << "\n";
  return kExitOk;
}

int cmd_solve2d(const Options& o) {
  const std::string base = o.case_name == "sinpi" ? "sinsq" : o.case_name;
  const Manufactured2D mc = o.mesh.rfind("file:", 0) == 0
                                ? case_2d(base)
                                : pick_case_2d(base, family_of(o).kind);
  const StaggeredMesh2D m = make_mesh2d(o);
  const StokesSolution sol = solve_stokes(m, mc.fields.psi_f, mc.fields.phi_f, o.tol);
  if (!sol.solve_report.converged) {
    std::cerr << "solver did not converge: relative residual "
              << sol.solve_report.relative_residual << "\n";
    return kExitSolver;
  }
  const Errors2D err = stokes_errors(m, sol, mc);
  std::cout.precision(12);
  std::cout << "n_dof=" << m.n_v_interior() << " cg_iters=" << sol.solve_report.iterations
            << " err_l2=" << err.l2 << " err_h1=" << err.h1
            << " momentum_residual=" << sol.momentum_residual_inf << "\n";
  if (!o.out_dir.empty()) {
    const fs::path dir = out_dir(o);
    fs::create_directories(dir);
    std::ofstream fu(dir / "u.field");
    save_field(sol.u, fu);
    std::ofstream fp(dir / "psi.field");
    save_field(sol.psi, fp);
    std::ofstream fo(dir / "omega.field");
    save_field(sol.omega, fo);
    std::ofstream fq(dir / "p.field");
    save_field(sol.p, fq);
    std::cout << "wrote fields to " << dir.string() << "\n";
  }
  return kExitOk;
}

int cmd_converge(const Options& o, bool two_d) {
  const fs::path dir = out_dir(o);
  fs::create_directories(dir);
  ConvergenceReport rep;
  if (two_d) {
    const MeshFamily2D fam = family_of(o);
    const Manufactured2D mc =
        pick_case_2d(o.case_name == "sinpi" ? "sinsq" : o.case_name, fam.kind);
    rep = run_2d_study(mc, fam, o.levels.empty() ? default_levels_2d(fam.kind) : o.levels,
                       o.tol);
  } else {
    MeshFamily1D fam;
    fam.ratio = o.ratio;
    fam.seed = o.seed;
    fam.kind = o.mesh == "uniform" ? MeshFamily1D::Uniform
               : o.mesh == "random-midpoint" ? MeshFamily1D::RandomMidpoint
                                             : MeshFamily1D::Random;
    rep = run_1d_study(case_1d(o.case_name), fam, o.levels.empty() ? default_levels_1d() : o.levels);
  }
  const std::string base = rep.case_name + "_" + rep.family;
  {
    std::ofstream csv(dir / (base + ".csv"));
    rep.write_csv(csv);
  }
  for (const char* norm : {"l2", "h1"}) {
    std::ofstream gp(dir / (base + "_" + norm + ".dat"));
    rep.write_loglog(gp, norm);
  }
  std::cout.precision(6);
  std::cout << "case " << rep.case_name << " on " << rep.family << ":\n";
  for (const auto& r : rep.levels) {
    std::cout << "  n=" << r.n << " h=" << r.h << " err_l2=" << r.err_l2
              << " err_h1=" << r.err_h1 << " (" << r.seconds << " s)\n";
  }
  std::cout << "fitted rates: l2=" << rep.rate_l2 << " h1=" << rep.rate_h1;
  if (rep.rate_tau_p)
    std::cout << " tau_p=" << *rep.rate_tau_p << " tau_f=" << *rep.rate_tau_f
              << " tau_omega=" << *rep.rate_tau_omega;
  std::cout << "\nwrote " << (dir / (base + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_identities(const Options& o) {
  const std::size_t n = o.n;
  double worst = 0.0;
  std::mt19937_64 gen(o.seed);
  auto rnd = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  std::vector<std::string> families = {"rect", "perturbed", "trihex"};
  if (o.mesh == "rect" || o.mesh == "perturbed" || o.mesh == "trihex") families = {o.mesh};
  for (const std::string& name : families) {
    const StaggeredMesh2D mesh = name == "rect"      ? gen_rect(n, n)
                                 : name == "perturbed" ? gen_perturbed(n, n, o.amplitude, o.seed)
                                                       : gen_tri_hex(n);
    double curl_grad = 0.0, div_perp = 0.0, adj1 = 0.0, adj2 = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      CellField phi = make_cell_field(mesh);
      for (double& v : phi.values) v = rnd();
      DualField psi = make_dual_field(mesh, true);
      for (std::size_t vv = 0; vv < mesh.n_v; ++vv)
        if (!mesh.dual_is_boundary[vv]) psi.values[vv] = rnd();
      EdgeField u = make_edge_field(mesh, true);
      for (std::size_t e = 0; e < mesh.n_e; ++e) u.values[e] = rnd();

      const DualField cg = curl(mesh, grad_cell(mesh, phi));
      for (std::size_t vv = 0; vv < mesh.n_v; ++vv)
        if (!mesh.dual_is_boundary[vv]) curl_grad = std::max(curl_grad, std::abs(cg.values[vv]));
      const CellField dp = div(mesh, perp_grad_dual(mesh, psi));
      for (std::size_t i = 0; i < mesh.n_c; ++i)
        div_perp = std::max(div_perp, std::abs(dp.values[i]));
      const double s1 = 2.0 * inner_edge(mesh, grad_cell(mesh, phi), u) +
                        inner_cell(mesh, phi, div(mesh, u));
      const double s2 = 2.0 * inner_edge(mesh, perp_grad_dual(mesh, psi), u) +
                        inner_dual(mesh, psi, curl(mesh, u));
      adj1 = std::max(adj1, std::abs(s1));
      adj2 = std::max(adj2, std::abs(s2));
    }
    const auto rep = validate(mesh);
    std::cout << name << " (n=" << n << "): curl(grad)=" << curl_grad
              << " div(perp)=" << div_perp << " adjointness_grad_div=" << adj1
              << " adjointness_perp_curl=" << adj2 << " Euler "
              << (rep.find("euler")->pass ? "OK" : "FAIL") << "\n";
    worst = std::max({worst, curl_grad, div_perp, adj1, adj2});
  }
  std::cout << "max identity residual: " << worst << "\n";
  return worst <= 1e-12 * 100.0 ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staggered finite-volume solvers and convergence harness"};
  app.set_config("--config", "", "plain key=value config file supplying flag defaults");
  app.allow_config_extras(false);
  Options o;
  app.add_option("--n", o.n, "resolution parameter");
  app.add_option("--nx", o.nx, "cells in x (2D tensor families)");
  app.add_option("--ny", o.ny, "cells in y");
  app.add_option("--ratio", o.ratio, "1D length-ratio bound");
  app.add_option("--amplitude", o.amplitude, "perturbation amplitude");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--levels", o.levels, "explicit resolution levels");
  app.add_option("--tol", o.tol, "solver tolerance");
  app.add_option("--out", o.out_dir, "output directory (default $STAGFV_OUT or .)");
  app.add_option("--mesh", o.mesh,
                 "mesh family: uniform|random|random-midpoint|rect|perturbed|trihex|file:<path>");
  app.add_option("--case", o.case_name, "manufactured case name");
  app.add_flag("--force", o.force, "accept meshes that fail validation");

  std::string path;
  auto* mesh_cmd = app.add_subcommand("mesh", "generate, check or describe meshes");
  mesh_cmd->fallthrough();
  auto* mesh_gen = mesh_cmd->add_subcommand("gen", "generate a mesh file");
  mesh_gen->fallthrough();
  mesh_gen->add_option("path", path, "output file")->required();
  auto* mesh_check = mesh_cmd->add_subcommand("check", "validate a mesh file");
  mesh_check->fallthrough();
  mesh_check->add_option("path", path, "mesh file")->required();
  auto* mesh_info = mesh_cmd->add_subcommand("info", "print mesh statistics");
  mesh_info->fallthrough();
  mesh_info->add_option("path", path, "mesh file")->required();
  auto* solve1d = app.add_subcommand("solve1d", "solve the 1D problem once");
  solve1d->fallthrough();
  auto* solve2d = app.add_subcommand("solve2d", "solve the 2D problem once");
  solve2d->fallthrough();
  auto* converge = app.add_subcommand("converge", "run a convergence study");
  converge->fallthrough();
  std::string dim = "1d";
  converge->add_option("dimension", dim, "1d or 2d")->required();
  auto* identities = app.add_subcommand("identities", "run the exact discrete-calculus checks");
  identities->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mesh_gen->parsed()) return cmd_mesh_gen(o, path);
    if (mesh_check->parsed()) return cmd_mesh_check(o, path);
    if (mesh_info->parsed()) return cmd_mesh_info(o, path);
    if (solve1d->parsed()) return cmd_solve1d(o);
    if (solve2d->parsed()) return cmd_solve2d(o);
    if (converge->parsed()) {
      if (dim != "1d" && dim != "2d") {
        std::cerr << "converge: dimension must be 1d or 2d\n";
        return kExitUsage;
      }
      return cmd_converge(o, dim == "2d");
    }
    if (identities->parsed()) return cmd_identities(o);
    std::cout << app.help();
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
