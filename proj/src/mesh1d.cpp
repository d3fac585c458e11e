#include "stagfv/mesh1d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "stagfv/rng.hpp"

namespace stagfv {

double Mesh1D::h_min() const {
  double m = 1.0;
  for (std::size_t i = 0; i < N; ++i) m = std::min(m, h(i));
  return m;
}

double Mesh1D::h_max() const {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, h(i));
  return m;
}

double Mesh1D::ratio_witness() const {
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    lo = std::min(lo, h(i));
    hi = std::max(hi, h(i));
  }
  for (std::size_t i = 1; i < N; ++i) {  // interior dual cells only
    lo = std::min(lo, h_half(i));
    hi = std::max(hi, h_half(i));
  }
  return hi / lo;
}

Mesh1D gen_uniform(std::size_t N) {
  if (N < 2) throw InvalidCount("gen_uniform: N >= 2 required");
  Mesh1D m;
  m.N = N;
  m.declared_ratio = 1.0;
  m.x_face.resize(N + 1);
  m.x_center.resize(N);
  for (std::size_t i = 0; i <= N; ++i) m.x_face[i] = static_cast<double>(i) / N;
  m.x_face[0] = 0.0;
  m.x_face[N] = 1.0;
  for (std::size_t i = 0; i < N; ++i) m.x_center[i] = (i + 0.5) / N;
  return m;
}

namespace {

// rejection draw from [1/rf, 1)
double draw_width(RandomStream& rs, double rf) {
  for (;;) {
    const double u = rs.next();
    if (u * rf >= 1.0) return u;
  }
}

// rejection draw from [0.5 - delta, 0.5 + delta]
double draw_theta(RandomStream& rs, double delta) {
  for (;;) {
    const double u = rs.next();
    if (std::abs(u - 0.5) <= delta) return u;
  }
}

}  // namespace

Mesh1D gen_random(std::size_t N, double ratio, std::uint64_t seed, CenterRule centers) {
  if (N < 2) throw InvalidCount("gen_random: N >= 2 required");
  if (!(ratio >= 1.0)) throw InvalidRatio("gen_random: ratio >= 1 required");
  Mesh1D m;
  m.N = N;
  m.declared_ratio = ratio;
  m.x_face.resize(N + 1);
  m.x_center.resize(N);

  // The total length ratio budget splits evenly between the face widths and
  // the center placement: rf * rtheta = ratio.
  const double rf = std::sqrt(ratio);
  const double delta = (rf - 1.0) / (2.0 * (rf + 1.0));
  const bool degenerate = rf < 1.0 + 1e-12;
  RandomStream rs(seed);

  if (centers == CenterRule::Midpoint) {
    // draw center gaps (half-size at the ends), faces at midpoints of centers
    std::vector<double> gap(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
      double g = degenerate ? 1.0 : draw_width(rs, rf);
      if (i == 0 || i == N) g *= 0.5;
      gap[i] = g;
    }
    double sum = 0.0;
    for (double g : gap) sum += g;
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      acc += gap[i] / sum;
      m.x_center[i] = acc;
    }
    m.x_face[0] = 0.0;
    m.x_face[N] = 1.0;
    for (std::size_t i = 1; i < N; ++i) m.x_face[i] = 0.5 * (m.x_center[i - 1] + m.x_center[i]);
  } else {
    std::vector<double> w(N);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      w[i] = degenerate ? 1.0 : draw_width(rs, rf);
      sum += w[i];
    }
    m.x_face[0] = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      acc += w[i] / sum;
      m.x_face[i + 1] = acc;
    }
    m.x_face[N] = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double theta = degenerate ? 0.5 : draw_theta(rs, delta);
      m.x_center[i] = m.x_face[i] + theta * (m.x_face[i + 1] - m.x_face[i]);
    }
  }
  return m;
}

std::vector<std::string> validate(const Mesh1D& m) {
  std::vector<std::string> out;
  if (m.x_face.size() != m.N + 1 || m.x_center.size() != m.N) {
    out.push_back("array lengths inconsistent with N");
    return out;
  }
  if (m.x_face.front() != 0.0 || m.x_face.back() != 1.0)
    out.push_back("end faces not pinned at 0 and 1");
  for (std::size_t i = 0; i < m.N; ++i) {
    if (!(m.x_face[i] < m.x_center[i] && m.x_center[i] < m.x_face[i + 1])) {
      out.push_back("interleaving violated at cell " + std::to_string(i));
      break;
    }
  }
  double sum = 0.0, sum_dual = 0.0;
  for (std::size_t i = 0; i < m.N; ++i) sum += m.h(i);
  for (std::size_t i = 0; i <= m.N; ++i) sum_dual += m.h_half(i);
  if (std::abs(sum - 1.0) > 1e-12) out.push_back("primary cells do not tile [0,1]");
  if (std::abs(sum_dual - 1.0) > 1e-12) out.push_back("dual cells do not tile [0,1]");
  for (std::size_t i = 0; i < m.N; ++i)
    if (!(m.h(i) > 0.0)) out.push_back("non-positive cell length at " + std::to_string(i));
  for (std::size_t i = 0; i <= m.N; ++i)
    if (!(m.h_half(i) > 0.0)) out.push_back("non-positive dual length at " + std::to_string(i));
  if (out.empty() && m.ratio_witness() > m.declared_ratio * (1.0 + 1e-12))
    out.push_back("length ratio exceeds declared bound");
  return out;
}

void save(const Mesh1D& m, std::ostream& out) {
  out << "mesh1d " << m.N << "\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i <= m.N; ++i) line << (i ? " " : "") << m.x_face[i];
  out << line.str() << "\n";
  line.str("");
  for (std::size_t i = 0; i < m.N; ++i) line << (i ? " " : "") << m.x_center[i];
  out << line.str() << "\n";
}

Mesh1D load_mesh1d(std::istream& in) {
  std::string tag;
  std::size_t N = 0;
  if (!(in >> tag >> N) || tag != "mesh1d") throw ParseError("expected 'mesh1d N' header", 1);
  Mesh1D m;
  m.N = N;
  m.x_face.resize(N + 1);
  m.x_center.resize(N);
  for (std::size_t i = 0; i <= N; ++i)
    if (!(in >> m.x_face[i])) throw ParseError("truncated face coordinates", 2);
  for (std::size_t i = 0; i < N; ++i)
    if (!(in >> m.x_center[i])) throw ParseError("truncated center coordinates", 3);
  m.declared_ratio = m.ratio_witness();
  return m;
}

}  // namespace stagfv
