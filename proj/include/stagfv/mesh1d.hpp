#ifndef STAGFV_MESH1D_HPP
#define STAGFV_MESH1D_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "stagfv/errors.hpp"

namespace stagfv {

enum class GridKind { Primary, Dual };
enum class CenterRule { Midpoint, Random };

/// Nonuniform staggered partition of [0,1]: N primary cells with centers
/// strictly inside, N+1 faces with the end faces pinned at 0 and 1. Dual
/// cells run center-to-center, the two end dual cells are face-to-center.
struct Mesh1D {
  std::size_t N = 0;
  std::vector<double> x_face;    // N+1, x_face[0]=0, x_face[N]=1
  std::vector<double> x_center;  // N
  double declared_ratio = 1.0;

  double h(std::size_t i) const { return x_face[i + 1] - x_face[i]; }
  // dual cell lengths, i = 0..N, with the 0/1 end convention
  double h_half(std::size_t i) const {
    const double lo = (i == 0) ? 0.0 : x_center[i - 1];
    const double hi = (i == N) ? 1.0 : x_center[i];
    return hi - lo;
  }
  double h_min() const;
  double h_max() const;
  // max/min length over primary cells and interior dual cells (the end half
  // cells are thinner by construction and excluded, so a uniform mesh
  // witnesses exactly 1).
  double ratio_witness() const;
};

struct Grid1DField {
  GridKind kind = GridKind::Primary;
  std::vector<double> values;

  static Grid1DField primary(std::size_t N) { return {GridKind::Primary, std::vector<double>(N, 0.0)}; }
  static Grid1DField dual(std::size_t N) { return {GridKind::Dual, std::vector<double>(N + 1, 0.0)}; }
};

Mesh1D gen_uniform(std::size_t N);

/// Seeded nonuniform mesh with the max/min length ratio clamped to `ratio`.
/// Midpoint centers place every interior face at the midpoint of its dual
/// cell; Random centers jitter them away from the midpoints.
Mesh1D gen_random(std::size_t N, double ratio, std::uint64_t seed, CenterRule centers);

/// Empty result means all invariants hold.
std::vector<std::string> validate(const Mesh1D& m);

void save(const Mesh1D& m, std::ostream& out);
Mesh1D load_mesh1d(std::istream& in);

}  // namespace stagfv

#endif
