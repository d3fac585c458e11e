#ifndef STAGFV_LINALG_HPP
#define STAGFV_LINALG_HPP

#include <cstddef>
#include <vector>

#include "stagfv/errors.hpp"

namespace stagfv {

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Sparse symmetric positive-definite matrix, compressed-row storage.
/// Assemble through SparseBuilder; duplicates are summed.
class SparseSpd {
 public:
  std::size_t n = 0;
  std::vector<std::size_t> row_offsets;  // size n+1
  std::vector<std::size_t> col_indices;
  std::vector<double> values;
  bool symmetry_checked = false;

  // y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> multiply(const std::vector<double>& x) const;

  double entry(std::size_t i, std::size_t j) const;  // 0 if not stored

  // Verifies structural + numeric symmetry (|a_ij - a_ji| <= 1e-12 max|a|)
  // and strictly positive diagonal; sets symmetry_checked.
  // Throws InvariantViolation on failure.
  void check_invariants();
};

/// Coordinate-triplet accumulator; convert once with build().
class SparseBuilder {
 public:
  explicit SparseBuilder(std::size_t n) : n_(n) {}
  void add(std::size_t i, std::size_t j, double v);
  SparseSpd build() const;  // sorts, sums duplicates, runs check_invariants

 private:
  std::size_t n_;
  std::vector<std::size_t> is_, js_;
  std::vector<double> vs_;
};

/// Jacobi-preconditioned conjugate gradients. Stops when ||b - Ax||_2 <= tol ||b||_2.
/// Non-convergence is not an error: the best iterate is returned with
/// report.converged = false.
std::pair<std::vector<double>, SolveReport> cg_solve(const SparseSpd& A,
                                                     const std::vector<double>& b,
                                                     double tol = 1e-12, int max_iter = -1);

/// Direct solve of a tridiagonal system. lower[0] and upper[n-1] are ignored.
std::vector<double> thomas_solve(const std::vector<double>& lower, const std::vector<double>& diag,
                                 const std::vector<double>& upper, const std::vector<double>& b);

// small vector helpers shared across modules
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);
double norm_inf(const std::vector<double>& a);

}  // namespace stagfv

#endif
