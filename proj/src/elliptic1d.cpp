#include "stagfv/elliptic1d.hpp"

#include <array>
#include <cmath>
#include <string>

namespace stagfv {

namespace {
// 5-point Gauss-Legendre on [-1,1]
constexpr std::array<double, 5> kGaussX = {-0.90617984593866396, -0.53846931010568311, 0.0,
                                           0.53846931010568311, 0.90617984593866396};
constexpr std::array<double, 5> kGaussW = {0.23692688505618908, 0.47862867049936647,
                                           0.56888888888888889, 0.47862867049936647,
                                           0.23692688505618908};
}  // namespace

namespace {

void require_length(const Mesh1D& m, const Grid1DField& f, const char* who) {
  const std::size_t want = f.kind == GridKind::Primary ? m.N : m.N + 1;
  if (f.values.size() != want)
    throw DimensionMismatch(std::string(who) + ": field length does not match its kind");
}

}  // namespace

Grid1DField grad_primal(const Mesh1D& m, const Grid1DField& u) {
  if (u.kind != GridKind::Primary) throw KindMismatch("grad_primal wants a primary field");
  require_length(m, u, "grad_primal");
  Grid1DField g = Grid1DField::dual(m.N);
  for (std::size_t i = 0; i <= m.N; ++i) {
    const double ul = (i == 0) ? 0.0 : u.values[i - 1];
    const double ur = (i == m.N) ? 0.0 : u.values[i];
    g.values[i] = (ur - ul) / m.h_half(i);
  }
  return g;
}

Grid1DField grad_dual(const Mesh1D& m, const Grid1DField& v) {
  if (v.kind != GridKind::Dual) throw KindMismatch("grad_dual wants a dual field");
  require_length(m, v, "grad_dual");
  Grid1DField g = Grid1DField::primary(m.N);
  for (std::size_t i = 0; i < m.N; ++i)
    g.values[i] = (v.values[i + 1] - v.values[i]) / m.h(i);
  return g;
}

double inner(const Mesh1D& m, const Grid1DField& a, const Grid1DField& b) {
  if (a.kind != b.kind) throw KindMismatch("inner: mixed field kinds");
  require_length(m, a, "inner");
  require_length(m, b, "inner");
  double s = 0.0;
  if (a.kind == GridKind::Primary) {
    for (std::size_t i = 0; i < m.N; ++i) s += a.values[i] * b.values[i] * m.h(i);
  } else {
    for (std::size_t i = 0; i <= m.N; ++i) s += a.values[i] * b.values[i] * m.h_half(i);
  }
  return s;
}

Grid1DField restrict_primal(const Mesh1D& m, const ScalarFn& u) {
  Grid1DField r = Grid1DField::primary(m.N);
  for (std::size_t i = 0; i < m.N; ++i) r.values[i] = u(m.x_center[i]);
  return r;
}

Grid1DField restrict_dual(const Mesh1D& m, const ScalarFn& w) {
  Grid1DField r = Grid1DField::dual(m.N);
  for (std::size_t i = 0; i <= m.N; ++i) r.values[i] = w(m.x_face[i]);
  return r;
}

Grid1DField flux_truncation(const Mesh1D& m, const ScalarFn& u, const ScalarFn& u_x) {
  Grid1DField tau = restrict_dual(m, u_x);
  const Grid1DField g = grad_primal(m, restrict_primal(m, u));
  for (std::size_t i = 0; i <= m.N; ++i) tau.values[i] -= g.values[i];
  return tau;
}

Norms1D norms(const Mesh1D& m, const Grid1DField& u) {
  if (u.kind != GridKind::Primary) throw KindMismatch("norms wants a primary field");
  Norms1D n;
  n.l2 = std::sqrt(inner(m, u, u));
  const Grid1DField g = grad_primal(m, u);
  n.h1 = std::sqrt(inner(m, g, g));
  return n;
}

Grid1DField cell_averages(const Mesh1D& m, const ScalarFn& f) {
  Grid1DField fa = Grid1DField::primary(m.N);
  for (std::size_t i = 0; i < m.N; ++i) {
    const double mid = 0.5 * (m.x_face[i] + m.x_face[i + 1]);
    const double half = 0.5 * m.h(i);
    double s = 0.0;
    for (int q = 0; q < 5; ++q) s += kGaussW[q] * f(mid + half * kGaussX[q]);
    fa.values[i] = 0.5 * s;  // average, not integral
  }
  return fa;
}

Tridiag assemble_scheme(const Mesh1D& m) {
  Tridiag t;
  t.lower.assign(m.N, 0.0);
  t.diag.assign(m.N, 0.0);
  t.upper.assign(m.N, 0.0);
  for (std::size_t i = 0; i < m.N; ++i) {
    t.diag[i] = 1.0 / m.h_half(i) + 1.0 / m.h_half(i + 1);
    if (i > 0) t.lower[i] = -1.0 / m.h_half(i);
    if (i + 1 < m.N) t.upper[i] = -1.0 / m.h_half(i + 1);
  }
  return t;
}

SparseSpd assemble_matrix(const Mesh1D& m) {
  const Tridiag t = assemble_scheme(m);
  SparseBuilder b(m.N);
  for (std::size_t i = 0; i < m.N; ++i) {
    b.add(i, i, t.diag[i]);
    if (i > 0) b.add(i, i - 1, t.lower[i]);
    if (i + 1 < m.N) b.add(i, i + 1, t.upper[i]);
  }
  return b.build();
}

Elliptic1DSolution assemble_and_solve(const Mesh1D& m, const Grid1DField& f) {
  if (f.kind != GridKind::Primary) throw KindMismatch("forcing must be a primary field");
  const Tridiag t = assemble_scheme(m);
  std::vector<double> rhs(m.N);
  for (std::size_t i = 0; i < m.N; ++i) rhs[i] = m.h(i) * f.values[i];
  Elliptic1DSolution sol;
  sol.f_h = f;
  sol.u_h = Grid1DField{GridKind::Primary, thomas_solve(t.lower, t.diag, t.upper, rhs)};
  sol.solve_report.converged = true;
  sol.solve_report.iterations = 0;  // direct path
  return sol;
}

Elliptic1DSolution assemble_and_solve(const Mesh1D& m, const ScalarFn& f) {
  return assemble_and_solve(m, cell_averages(m, f));
}

}  // namespace stagfv
