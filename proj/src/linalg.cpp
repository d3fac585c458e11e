#include "stagfv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stagfv {

void SparseSpd::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  if (x.size() != n) throw DimensionMismatch("matvec: wrong vector length");
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      s += values[k] * x[col_indices[k]];
    y[i] = s;
  }
}

std::vector<double> SparseSpd::multiply(const std::vector<double>& x) const {
  std::vector<double> y;
  multiply(x, y);
  return y;
}

double SparseSpd::entry(std::size_t i, std::size_t j) const {
  for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
    if (col_indices[k] == j) return values[k];
  return 0.0;
}

void SparseSpd::check_invariants() {
  double amax = 0.0;
  for (double v : values) amax = std::max(amax, std::abs(v));
  const double tol = 1e-12 * amax;
  for (std::size_t i = 0; i < n; ++i) {
    bool has_diag = false;
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
      const std::size_t j = col_indices[k];
      if (j == i) {
        has_diag = true;
        if (!(values[k] > 0.0)) throw InvariantViolation("non-positive diagonal entry");
        continue;
      }
      const double aji = entry(j, i);
      if (std::abs(values[k] - aji) > tol)
        throw InvariantViolation("matrix not numerically symmetric");
    }
    if (!has_diag) throw InvariantViolation("missing diagonal entry");
  }
  symmetry_checked = true;
}

void SparseBuilder::add(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_) throw DimensionMismatch("triplet index out of range");
  is_.push_back(i);
  js_.push_back(j);
  vs_.push_back(v);
}

SparseSpd SparseBuilder::build() const {
  std::vector<std::size_t> order(is_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return is_[a] != is_[b] ? is_[a] < is_[b] : js_[a] < js_[b];
  });
  SparseSpd A;
  A.n = n_;
  A.row_offsets.assign(n_ + 1, 0);
  for (std::size_t t = 0; t < order.size(); ++t) {
    const std::size_t k = order[t];
    if (t > 0) {
      const std::size_t p = order[t - 1];
      if (is_[p] == is_[k] && js_[p] == js_[k]) {  // duplicate: sum into previous
        A.values.back() += vs_[k];
        continue;
      }
    }
    A.col_indices.push_back(js_[k]);
    A.values.push_back(vs_[k]);
    ++A.row_offsets[is_[k] + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
  A.check_invariants();
  return A;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

std::pair<std::vector<double>, SolveReport> cg_solve(const SparseSpd& A,
                                                     const std::vector<double>& b, double tol,
                                                     int max_iter) {
  if (b.size() != A.n) throw DimensionMismatch("cg_solve: rhs length != matrix dimension");
  if (max_iter < 0) max_iter = static_cast<int>(10 * A.n);
  const std::size_t n = A.n;

  std::vector<double> invdiag(n);
  for (std::size_t i = 0; i < n; ++i) invdiag[i] = 1.0 / A.entry(i, i);

  std::vector<double> x(n, 0.0), r = b, z(n), p(n), q(n);
  SolveReport rep;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    return {x, rep};
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  double rnorm = norm2(r);
  while (rep.iterations < max_iter) {
    ++rep.iterations;
    A.multiply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = norm2(r);
    if (rnorm <= tol * bnorm) break;
    for (std::size_t i = 0; i < n; ++i) z[i] = invdiag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.relative_residual = rnorm / bnorm;
  rep.converged = rep.relative_residual <= tol;
  return {x, rep};
}

std::vector<double> thomas_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                                 const std::vector<double>& upper, const std::vector<double>& b) {
  const std::size_t n = diag.size();
  if (lower.size() != n || upper.size() != n || b.size() != n)
    throw DimensionMismatch("thomas_solve: band lengths differ");
  std::vector<double> cp(n), dp(n), x(n);
  if (diag[0] == 0.0) throw ZeroPivot("zero pivot at row 0");
  cp[0] = upper[0] / diag[0];
  dp[0] = b[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double den = diag[i] - lower[i] * cp[i - 1];
    if (den == 0.0) throw ZeroPivot("zero pivot at row " + std::to_string(i));
    cp[i] = upper[i] / den;
    dp[i] = (b[i] - lower[i] * dp[i - 1]) / den;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

}  // namespace stagfv
