#include "stagfv/mesh2d.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "stagfv/rng.hpp"

namespace stagfv {

namespace {

double length(Vec2 a) { return std::sqrt(dot(a, a)); }

void sort_ccw(std::vector<int>& ids, const std::vector<Vec2>& pts, Vec2 anchor) {
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const Vec2 pa = pts[a] - anchor, pb = pts[b] - anchor;
    return std::atan2(pa.y, pa.x) < std::atan2(pb.y, pb.x);
  });
}

}  // namespace

std::size_t StaggeredMesh2D::n_v_interior() const {
  std::size_t k = 0;
  for (auto f : dual_is_boundary)
    if (!f) ++k;
  return k;
}

void StaggeredMesh2D::finalize() {
  const std::size_t nc = n_cells(), ne = n_edges_total();
  EC.assign(nc, {});
  EV.assign(n_v, {});
  for (std::size_t e = 0; e < ne; ++e) {
    const Edge2D& ed = edge[e];
    if (ed.cell1 != kGhost) EC[ed.cell1].push_back(static_cast<int>(e));
    if (ed.cell2 != kGhost) EC[ed.cell2].push_back(static_cast<int>(e));
    if (ed.dual1 != kGhost) EV[ed.dual1].push_back(static_cast<int>(e));
    if (ed.dual2 != kGhost) EV[ed.dual2].push_back(static_cast<int>(e));
  }
  // cyclic orders via edge crossings
  std::vector<Vec2> xs(ne);
  for (std::size_t e = 0; e < ne; ++e) xs[e] = edge[e].crossing;
  for (std::size_t i = 0; i < nc; ++i) sort_ccw(EC[i], xs, cell_center[i]);
  for (std::size_t v = 0; v < n_v; ++v) sort_ccw(EV[v], xs, dual_center[v]);

  VC.assign(nc, {});
  for (std::size_t i = 0; i < nc; ++i) {
    std::vector<int> ds;
    for (int e : EC[i])
      for (int d : {edge[e].dual1, edge[e].dual2})
        if (d != kGhost && std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
    sort_ccw(ds, dual_center, cell_center[i]);
    VC[i] = ds;
  }
  CV.assign(n_v, {});
  for (std::size_t v = 0; v < n_v; ++v) {
    std::vector<int> cs;
    for (int e : EV[v])
      for (int c : {edge[e].cell1, edge[e].cell2})
        if (c != kGhost && std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    sort_ccw(cs, cell_center, dual_center[v]);
    CV[v] = cs;
  }

  double lo = 1e300, hi = 0.0;
  for (const Edge2D& e : edge) {
    lo = std::min({lo, e.l_e, e.d_e});
    hi = std::max({hi, e.l_e, e.d_e});
  }
  if (h <= 0.0) h = hi;
  m_const = lo / h;
  M_const = hi / h;
}

// ---------------------------------------------------------------------------
// rectangular / stretched tensor family.  Primary centers form an nx x ny
// lattice whose outermost centers lie on the boundary of the unit square;
// faces sit midway between neighbouring center coordinates, dual cells are
// the face-corner boxes.

namespace {

StaggeredMesh2D build_tensor(const std::vector<double>& xi, const std::vector<double>& eta) {
  const std::size_t nx = xi.size(), ny = eta.size();
  StaggeredMesh2D m;
  m.domain_area = 1.0;
  m.h = std::max(1.0 / (nx - 1), 1.0 / (ny - 1));

  // faces between center coordinates, walls pinned
  std::vector<double> fx(nx + 1), fy(ny + 1);
  fx[0] = 0.0;
  fx[nx] = 1.0;
  for (std::size_t i = 0; i + 1 < nx; ++i) fx[i + 1] = 0.5 * (xi[i] + xi[i + 1]);
  fy[0] = 0.0;
  fy[ny] = 1.0;
  for (std::size_t j = 0; j + 1 < ny; ++j) fy[j + 1] = 0.5 * (eta[j] + eta[j + 1]);

  // cells, interior first
  std::vector<int> cell_id(nx * ny, -1);
  auto lat = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  auto is_bnd_cell = [&](std::size_t i, std::size_t j) {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  };
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        if (is_bnd_cell(i, j) == (pass == 1)) {
          cell_id[lat(i, j)] = static_cast<int>(m.cell_center.size());
          m.cell_center.push_back({xi[i], eta[j]});
          m.cell_area.push_back((fx[i + 1] - fx[i]) * (fy[j + 1] - fy[j]));
          pass == 1 ? ++m.n_cb : ++m.n_c;
        }

  // duals: every interior lattice corner (face intersections)
  std::vector<int> dual_id((nx - 1) * (ny - 1), -1);
  auto dlat = [&](std::size_t i, std::size_t j) { return j * (nx - 1) + i; };
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      dual_id[dlat(i, j)] = static_cast<int>(m.dual_center.size());
      m.dual_center.push_back({fx[i + 1], fy[j + 1]});
      m.dual_area.push_back((xi[i + 1] - xi[i]) * (eta[j + 1] - eta[j]));
      m.dual_is_boundary.push_back(0);
    }
  m.n_v = m.dual_center.size();

  auto dual_at = [&](long i, long j) -> int {
    if (i < 0 || j < 0 || i >= static_cast<long>(nx - 1) || j >= static_cast<long>(ny - 1))
      return kGhost;
    return dual_id[dlat(i, j)];
  };

  // edges: horizontal adjacencies (n = +x), then vertical (n = +y);
  // interior pairs first, wall-aligned pairs last
  std::vector<Edge2D> interior, boundary;
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      Edge2D e;
      e.cell1 = cell_id[lat(i, j)];
      e.cell2 = cell_id[lat(i + 1, j)];
      e.normal = {1.0, 0.0};
      e.d_e = xi[i + 1] - xi[i];
      e.crossing = {fx[i + 1], eta[j]};
      e.dual1 = dual_at(i, static_cast<long>(j) - 1);  // below (tangent +y)
      e.dual2 = dual_at(i, static_cast<long>(j));
      const double ybot = e.dual1 != kGhost ? m.dual_center[e.dual1].y : 2.0 * eta[j] - fy[j + 1];
      const double ytop = e.dual2 != kGhost ? m.dual_center[e.dual2].y : 2.0 * eta[j] - fy[j];
      e.l_e = ytop - ybot;
      e.bisection_offset = std::abs(0.5 * (ytop + ybot) - e.crossing.y);
      (j == 0 || j == ny - 1 ? boundary : interior).push_back(e);
    }
  for (std::size_t j = 0; j + 1 < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      Edge2D e;
      e.cell1 = cell_id[lat(i, j)];
      e.cell2 = cell_id[lat(i, j + 1)];
      e.normal = {0.0, 1.0};
      e.d_e = eta[j + 1] - eta[j];
      e.crossing = {xi[i], fy[j + 1]};
      // tangent k x n = (-1, 0): dual1 on the +x side
      e.dual1 = dual_at(static_cast<long>(i), static_cast<long>(j));
      e.dual2 = dual_at(static_cast<long>(i) - 1, static_cast<long>(j));
      const double xr = e.dual1 != kGhost ? m.dual_center[e.dual1].x : 2.0 * xi[i] - fx[i];
      const double xl = e.dual2 != kGhost ? m.dual_center[e.dual2].x : 2.0 * xi[i] - fx[i + 1];
      e.l_e = xr - xl;
      e.bisection_offset = std::abs(0.5 * (xr + xl) - e.crossing.x);
      (i == 0 || i == nx - 1 ? boundary : interior).push_back(e);
    }
  m.n_e = interior.size();
  m.n_eb = boundary.size();
  m.edge = std::move(interior);
  m.edge.insert(m.edge.end(), boundary.begin(), boundary.end());
  m.h = std::max(1.0 / (nx - 1), 1.0 / (ny - 1));
  m.finalize();
  return m;
}

double smooth_field(const std::array<double, 3>& c, double t) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) s += c[k] * std::sin(2.0 * (k + 1) * M_PI * t);
  return s;
}

}  // namespace

StaggeredMesh2D gen_rect(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) throw InvalidCount("gen_rect: nx, ny >= 2 required");
  std::vector<double> xi(nx), eta(ny);
  for (std::size_t i = 0; i < nx; ++i) xi[i] = static_cast<double>(i) / (nx - 1);
  for (std::size_t j = 0; j < ny; ++j) eta[j] = static_cast<double>(j) / (ny - 1);
  return build_tensor(xi, eta);
}

StaggeredMesh2D gen_perturbed(std::size_t nx, std::size_t ny, double amplitude,
                              std::uint64_t seed) {
  if (nx < 2 || ny < 2) throw InvalidCount("gen_perturbed: nx, ny >= 2 required");
  if (!(amplitude >= 0.0 && amplitude < 0.25))
    throw InvalidRatio("gen_perturbed: amplitude in [0, 0.25) required");
  RandomStream rs(seed);
  std::array<double, 3> c{};
  double norm = 0.0;
  for (double& ck : c) {
    ck = rs.next(-1.0, 1.0);
    norm += std::abs(ck);
  }
  for (double& ck : c) ck /= norm;

  const double dx = 1.0 / (nx - 1), dy = 1.0 / (ny - 1);
  std::vector<double> xi(nx), eta(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    const double t = static_cast<double>(i) / (nx - 1);
    xi[i] = (i == 0 || i == nx - 1) ? t : t + amplitude * dx * smooth_field(c, t);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    const double t = static_cast<double>(j) / (ny - 1);
    eta[j] = (j == 0 || j == ny - 1) ? t : t + amplitude * dy * smooth_field(c, t);
  }
  StaggeredMesh2D m = build_tensor(xi, eta);
  const MeshQualityReport rep = validate(m);
  for (const auto& chk : rep.checks)
    if (!chk.pass && (chk.name == "convexity" || chk.name == "quasi-uniformity"))
      throw QualityFailure("gen_perturbed: " + chk.name + " failed (" + chk.detail + ")");
  return m;
}

// ---------------------------------------------------------------------------
// equilateral triangle / hexagon family on the unit rhombus

StaggeredMesh2D gen_tri_hex(std::size_t n) {
  if (n < 2) throw InvalidCount("gen_tri_hex: n >= 2 required");
  const double a = 1.0 / n;
  const double s3 = std::sqrt(3.0);
  StaggeredMesh2D m;
  m.h = a;
  m.domain_area = s3 / 2.0;

  auto vpos = [&](std::size_t i, std::size_t j) -> Vec2 {
    return {(i + 0.5 * j) * a, 0.5 * s3 * j * a};
  };
  auto vert_is_bnd = [&](std::size_t i, std::size_t j) {
    return i == 0 || j == 0 || i == n || j == n;
  };

  // duals = lattice vertices, interior first
  std::vector<int> dual_id((n + 1) * (n + 1), -1);
  auto dlat = [&](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j <= n; ++j)
      for (std::size_t i = 0; i <= n; ++i)
        if (vert_is_bnd(i, j) == (pass == 1)) {
          dual_id[dlat(i, j)] = static_cast<int>(m.dual_center.size());
          m.dual_center.push_back(vpos(i, j));
          m.dual_area.push_back(0.0);  // filled below
          m.dual_is_boundary.push_back(pass == 1 ? 1 : 0);
        }
  m.n_v = m.dual_center.size();

  // triangles: up(i,j) and down(i,j); cells bordering a rhombus side are boundary cells
  struct Tri {
    bool up;
    std::size_t i, j;
  };
  std::vector<Tri> tris;
  auto tri_is_bnd = [&](const Tri& t) {
    if (t.up) return t.j == 0 || t.i == 0;
    return t.i == n - 1 || t.j == n - 1;
  };
  std::vector<int> tri_id(2 * n * n, -1);
  auto tlat = [&](bool up, std::size_t i, std::size_t j) { return 2 * (j * n + i) + (up ? 0 : 1); };
  const double tri_area = s3 / 4.0 * a * a;
  for (int pass = 0; pass < 2; ++pass)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i)
        for (bool up : {true, false}) {
          Tri t{up, i, j};
          if (tri_is_bnd(t) != (pass == 1)) continue;
          tri_id[tlat(up, i, j)] = static_cast<int>(m.cell_center.size());
          tris.push_back(t);
          Vec2 ctr = up ? (1.0 / 3.0) * (vpos(i, j) + vpos(i + 1, j) + vpos(i, j + 1))
                        : (1.0 / 3.0) * (vpos(i + 1, j) + vpos(i + 1, j + 1) + vpos(i, j + 1));
          m.cell_center.push_back(ctr);
          m.cell_area.push_back(tri_area);
          pass == 1 ? ++m.n_cb : ++m.n_c;
        }

  // edge pairs from shared lattice edges; wall faces become boundary pairs
  std::map<std::pair<std::size_t, std::size_t>, std::pair<int, int>> owner;
  auto visit = [&](int cell, std::size_t va, std::size_t vb) {
    auto key = std::minmax(va, vb);
    auto it = owner.find(key);
    if (it == owner.end())
      owner[key] = {cell, kGhost};
    else
      it->second.second = cell;
  };
  auto tri_verts = [&](const Tri& t) -> std::array<std::size_t, 3> {
    if (t.up) return {dlat(t.i, t.j), dlat(t.i + 1, t.j), dlat(t.i, t.j + 1)};
    return {dlat(t.i + 1, t.j), dlat(t.i + 1, t.j + 1), dlat(t.i, t.j + 1)};
  };
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const auto vs = tri_verts(tris[k]);
    // recover the stored cell id for this triangle
    const Tri& t = tris[k];
    const int cid = tri_id[tlat(t.up, t.i, t.j)];
    visit(cid, vs[0], vs[1]);
    visit(cid, vs[1], vs[2]);
    visit(cid, vs[2], vs[0]);
  }

  std::vector<Edge2D> interior, boundary;
  for (const auto& [key, cells] : owner) {
    const std::size_t la = key.first, lb = key.second;
    const Vec2 pa = m.dual_center[dual_id[la]], pb = m.dual_center[dual_id[lb]];
    Edge2D e;
    e.l_e = length(pb - pa);
    e.crossing = 0.5 * (pa + pb);
    if (cells.second != kGhost) {
      e.cell1 = cells.first;
      e.cell2 = cells.second;
      const Vec2 c1 = m.cell_center[e.cell1], c2 = m.cell_center[e.cell2];
      e.d_e = length(c2 - c1);
      e.normal = (1.0 / e.d_e) * (c2 - c1);
    } else {
      // wall face: mirror cell across the boundary edge
      e.cell1 = cells.first;
      e.cell2 = kGhost;
      const Vec2 c1 = m.cell_center[e.cell1];
      const Vec2 t_hat = (1.0 / e.l_e) * (pb - pa);
      Vec2 out = e.crossing - c1;
      out = out - dot(out, t_hat) * t_hat;  // component normal to the wall
      const double dist = length(out);
      e.d_e = 2.0 * dist;
      e.normal = (1.0 / dist) * out;
    }
    // order duals along the tangent k x n
    const Vec2 t_e = perp(e.normal);
    if (dot(pb - pa, t_e) > 0) {
      e.dual1 = dual_id[la];
      e.dual2 = dual_id[lb];
    } else {
      e.dual1 = dual_id[lb];
      e.dual2 = dual_id[la];
    }
    e.bisection_offset =
        length(e.crossing - 0.5 * (m.dual_center[e.dual1] + m.dual_center[e.dual2]));
    (cells.second == kGhost ? boundary : interior).push_back(e);
  }
  m.n_e = interior.size();
  m.n_eb = boundary.size();
  m.edge = std::move(interior);
  m.edge.insert(m.edge.end(), boundary.begin(), boundary.end());

  // dual-cell areas: shoelace over the surrounding cell centers, closed with
  // the wall crossings and the vertex itself for the clipped boundary cells
  m.finalize();
  for (std::size_t v = 0; v < m.n_v; ++v) {
    std::vector<Vec2> poly;
    for (int cidx : m.CV[v]) poly.push_back(m.cell_center[cidx]);
    if (m.dual_is_boundary[v]) {
      for (int eidx : m.EV[v])
        if (m.edge_is_boundary(eidx)) poly.push_back(m.edge[eidx].crossing);
      poly.push_back(m.dual_center[v]);
      Vec2 ctr{0, 0};
      for (Vec2 p : poly) ctr = ctr + (1.0 / poly.size()) * p;
      std::sort(poly.begin(), poly.end(), [&](Vec2 p, Vec2 q) {
        return std::atan2(p.y - ctr.y, p.x - ctr.x) < std::atan2(q.y - ctr.y, q.x - ctr.x);
      });
    }
    double s = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 p = poly[k], q = poly[(k + 1) % poly.size()];
      s += cross(p, q);
    }
    m.dual_area[v] = 0.5 * std::abs(s);
  }
  return m;
}

// ---------------------------------------------------------------------------
// validation

bool MeshQualityReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const QualityCheck* MeshQualityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

MeshQualityReport validate(const StaggeredMesh2D& m, double bisection_c) {
  MeshQualityReport rep;
  auto add = [&](QualityCheck c) { rep.checks.push_back(std::move(c)); };

  {
    QualityCheck c;
    c.name = "euler";
    const long lhs = static_cast<long>(m.n_c + m.n_cb + m.n_v);
    const long rhs = static_cast<long>(m.n_e + m.n_eb + 1);
    c.pass = lhs == rhs;
    c.magnitude = static_cast<double>(lhs - rhs);
    c.detail = std::to_string(lhs) + "=" + std::to_string(rhs);
    add(c);
  }
  {
    QualityCheck c;
    c.name = "orthogonality";
    for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      double err = std::abs(length(ed.normal) - 1.0);
      if (ed.cell1 != kGhost && ed.cell2 != kGhost) {
        const Vec2 d = m.cell_center[ed.cell2] - m.cell_center[ed.cell1];
        err = std::max(err, std::abs(cross(ed.normal, d)) / ed.d_e);
      }
      if (ed.dual1 != kGhost && ed.dual2 != kGhost) {
        const Vec2 t = m.dual_center[ed.dual2] - m.dual_center[ed.dual1];
        err = std::max(err, std::abs(dot(ed.normal, t)) / ed.l_e);
      }
      if (err > c.magnitude) {
        c.magnitude = err;
        c.worst_element = static_cast<long>(e);
      }
    }
    c.pass = c.magnitude <= 1e-12;
    add(c);
  }
  {
    QualityCheck c;
    c.name = "orientation";
    // normals must run cell1 -> cell2 and tangents dual1 -> dual2
    for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      bool ok = true;
      if (ed.cell1 != kGhost && ed.cell2 != kGhost)
        ok = ok && dot(ed.normal, m.cell_center[ed.cell2] - m.cell_center[ed.cell1]) > 0;
      if (ed.dual1 != kGhost && ed.dual2 != kGhost)
        ok = ok && dot(ed.tangent(), m.dual_center[ed.dual2] - m.dual_center[ed.dual1]) > 0;
      if (!ok) {
        c.pass = false;
        c.worst_element = static_cast<long>(e);
        c.detail = "edge " + std::to_string(e) + " direction indicators inconsistent";
        break;
      }
    }
    add(c);
  }
  {
    QualityCheck c;
    c.name = "connectivity";
    bool ok = m.EC.size() == m.n_cells() && m.EV.size() == m.n_v;
    for (std::size_t i = 0; ok && i < m.n_cells(); ++i)
      for (int e : m.EC[i])
        ok = ok && (m.edge[e].cell1 == static_cast<int>(i) || m.edge[e].cell2 == static_cast<int>(i));
    for (std::size_t v = 0; ok && v < m.n_v; ++v)
      for (int e : m.EV[v])
        ok = ok && (m.edge[e].dual1 == static_cast<int>(v) || m.edge[e].dual2 == static_cast<int>(v));
    // reverse inclusion
    for (std::size_t e = 0; ok && e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      for (int i : {ed.cell1, ed.cell2})
        if (i != kGhost)
          ok = ok && std::find(m.EC[i].begin(), m.EC[i].end(), static_cast<int>(e)) != m.EC[i].end();
      for (int v : {ed.dual1, ed.dual2})
        if (v != kGhost)
          ok = ok && std::find(m.EV[v].begin(), m.EV[v].end(), static_cast<int>(e)) != m.EV[v].end();
    }
    c.pass = ok;
    add(c);
  }
  {
    QualityCheck c;
    c.name = "quasi-uniformity";
    double lo = 1e300, hi = 0.0;
    long worst = -1;
    for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      const double mn = std::min(ed.l_e, ed.d_e), mx = std::max(ed.l_e, ed.d_e);
      if (mn < lo) {
        lo = mn;
        worst = static_cast<long>(e);
      }
      hi = std::max(hi, mx);
    }
    c.pass = lo > 0.0 && lo >= m.m_const * m.h * (1.0 - 1e-12) &&
             hi <= m.M_const * m.h * (1.0 + 1e-12);
    c.worst_element = worst;
    c.magnitude = lo > 0.0 ? hi / lo : 0.0;
    add(c);
  }
  {
    QualityCheck c;
    c.name = "convexity";
    for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      const Vec2 t = ed.tangent();
      bool ok = true;
      if (ed.cell1 != kGhost && ed.cell2 != kGhost) {
        const double s = dot(ed.crossing - m.cell_center[ed.cell1], ed.normal);
        ok = ok && s > 0.0 && s < ed.d_e;
      }
      if (ed.dual1 != kGhost) {
        const double s = dot(ed.crossing - m.dual_center[ed.dual1], t);
        ok = ok && (ed.dual2 != kGhost ? (s > 0.0 && s < ed.l_e) : std::abs(s) < ed.l_e);
      }
      if (ed.dual2 != kGhost) {
        const double s = dot(m.dual_center[ed.dual2] - ed.crossing, t);
        ok = ok && s > 0.0 && s < ed.l_e;
      }
      if (!ok) {
        c.pass = false;
        c.worst_element = static_cast<long>(e);
        break;
      }
    }
    add(c);
  }
  {
    QualityCheck c;
    c.name = "near-bisection";
    const double bound = bisection_c * m.h * m.h;
    for (std::size_t e = 0; e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      double off = ed.bisection_offset;
      if (ed.dual1 != kGhost && ed.dual2 != kGhost) {
        const Vec2 mid = 0.5 * (m.dual_center[ed.dual1] + m.dual_center[ed.dual2]);
        const Vec2 d = ed.crossing - mid;
        off = std::sqrt(dot(d, d));
      }
      if (off > c.magnitude) {
        c.magnitude = off;
        c.worst_element = static_cast<long>(e);
      }
    }
    c.pass = c.magnitude <= bound;
    c.detail = "max offset / h^2 = " + std::to_string(c.magnitude / (m.h * m.h));
    add(c);
  }
  {
    QualityCheck c;
    c.name = "areas";
    double cells = 0.0, duals = 0.0;
    for (double v : m.cell_area) cells += v;
    for (double v : m.dual_area) duals += v;
    bool ok = true;
    for (double v : m.cell_area) ok = ok && v > 0.0;
    for (double v : m.dual_area) ok = ok && v > 0.0;
    if (m.domain_area > 0.0) {
      ok = ok && std::abs(cells - m.domain_area) <= 1e-10 * m.domain_area;
      ok = ok && duals <= cells * (1.0 + 1e-10);
    }
    c.pass = ok;
    c.magnitude = m.domain_area > 0.0 ? std::abs(cells - m.domain_area) : 0.0;
    c.detail = "sum cells = " + std::to_string(cells) + ", sum duals = " + std::to_string(duals);
    add(c);
  }
  {
    QualityCheck c;
    c.name = "boundary-structure";
    bool ok = true;
    for (std::size_t e = 0; ok && e < m.n_edges_total(); ++e) {
      const Edge2D& ed = m.edge[e];
      if (!m.edge_is_boundary(e))
        ok = ed.cell1 != kGhost && ed.cell2 != kGhost && ed.dual1 != kGhost && ed.dual2 != kGhost;
    }
    c.pass = ok;
    add(c);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// text serialization

void save(const StaggeredMesh2D& m, std::ostream& out) {
  std::ostringstream os;
  os.precision(17);
  os << "mesh2d 1\n";
  os << "counts " << m.n_c << " " << m.n_cb << " " << m.n_v << " " << m.n_e << " " << m.n_eb
     << "\n";
  os << "cells\n";
  for (std::size_t i = 0; i < m.n_cells(); ++i)
    os << m.cell_center[i].x << " " << m.cell_center[i].y << " " << m.cell_area[i] << "\n";
  os << "duals\n";
  for (std::size_t v = 0; v < m.n_v; ++v)
    os << m.dual_center[v].x << " " << m.dual_center[v].y << " " << m.dual_area[v] << " "
       << int(m.dual_is_boundary[v]) << "\n";
  os << "edges\n";
  for (const Edge2D& e : m.edge)
    os << e.cell1 + 1 << " " << e.cell2 + 1 << " " << e.dual1 + 1 << " " << e.dual2 + 1 << " "
       << e.normal.x << " " << e.normal.y << " " << e.l_e << " " << e.d_e << "\n";
  os << "connectivity\n";
  os << "EC\n";
  for (const auto& row : m.EC) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k] + 1;
    os << "\n";
  }
  os << "EV\n";
  for (const auto& row : m.EV) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k] + 1;
    os << "\n";
  }
  out << os.str();
}

namespace {

// line-based reader that strips '#' comments and tracks line numbers
struct LineReader {
  std::istream& in;
  long line_no = 0;
  bool next(std::string& out) {
    std::string s;
    while (std::getline(in, s)) {
      ++line_no;
      const auto hash = s.find('#');
      if (hash != std::string::npos) s.erase(hash);
      bool blank = true;
      for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (!blank) {
        out = s;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

StaggeredMesh2D load_mesh2d(std::istream& in, bool force) {
  LineReader rd{in};
  std::string line, word;
  auto expect_line = [&](const char* what) {
    if (!rd.next(line)) throw ParseError(std::string("unexpected end of file, expected ") + what,
                                         rd.line_no);
    return std::istringstream(line);
  };

  {
    auto ls = expect_line("'mesh2d 1' header");
    int version = 0;
    if (!(ls >> word >> version) || word != "mesh2d" || version != 1)
      throw ParseError("expected 'mesh2d 1' header", rd.line_no);
  }
  StaggeredMesh2D m;
  {
    auto ls = expect_line("counts");
    if (!(ls >> word >> m.n_c >> m.n_cb >> m.n_v >> m.n_e >> m.n_eb) || word != "counts")
      throw ParseError("expected 'counts n_c n_cb n_v n_e n_eb'", rd.line_no);
  }
  {
    auto ls = expect_line("'cells'");
    if (!(ls >> word) || word != "cells") throw ParseError("expected 'cells' section", rd.line_no);
  }
  for (std::size_t i = 0; i < m.n_c + m.n_cb; ++i) {
    auto ls = expect_line("cell line");
    Vec2 p;
    double area;
    if (!(ls >> p.x >> p.y >> area)) throw ParseError("malformed cell line", rd.line_no);
    m.cell_center.push_back(p);
    m.cell_area.push_back(area);
  }
  {
    auto ls = expect_line("'duals'");
    if (!(ls >> word) || word != "duals") throw ParseError("expected 'duals' section", rd.line_no);
  }
  for (std::size_t v = 0; v < m.n_v; ++v) {
    auto ls = expect_line("dual line");
    Vec2 p;
    double area;
    int bnd;
    if (!(ls >> p.x >> p.y >> area >> bnd)) throw ParseError("malformed dual line", rd.line_no);
    m.dual_center.push_back(p);
    m.dual_area.push_back(area);
    m.dual_is_boundary.push_back(static_cast<std::uint8_t>(bnd));
  }
  {
    auto ls = expect_line("'edges'");
    if (!(ls >> word) || word != "edges") throw ParseError("expected 'edges' section", rd.line_no);
  }
  for (std::size_t e = 0; e < m.n_e + m.n_eb; ++e) {
    auto ls = expect_line("edge line");
    Edge2D ed;
    long i1, i2, v1, v2;
    if (!(ls >> i1 >> i2 >> v1 >> v2 >> ed.normal.x >> ed.normal.y >> ed.l_e >> ed.d_e))
      throw ParseError("malformed edge line", rd.line_no);
    ed.cell1 = static_cast<int>(i1) - 1;
    ed.cell2 = static_cast<int>(i2) - 1;
    ed.dual1 = static_cast<int>(v1) - 1;
    ed.dual2 = static_cast<int>(v2) - 1;
    const long ncl = static_cast<long>(m.n_c + m.n_cb), nvl = static_cast<long>(m.n_v);
    if (ed.cell1 < kGhost || ed.cell2 < kGhost || ed.cell1 >= ncl || ed.cell2 >= ncl ||
        ed.dual1 < kGhost || ed.dual2 < kGhost || ed.dual1 >= nvl || ed.dual2 >= nvl)
      throw ParseError("edge references an out-of-range cell or dual", rd.line_no);
    // crossing: midpoint of the dual edge where both cells exist, else the
    // midpoint of the primary edge (wall faces)
    if (ed.cell1 != kGhost && ed.cell2 != kGhost)
      ed.crossing = 0.5 * (m.cell_center[ed.cell1] + m.cell_center[ed.cell2]);
    else if (ed.dual1 != kGhost && ed.dual2 != kGhost)
      ed.crossing = 0.5 * (m.dual_center[ed.dual1] + m.dual_center[ed.dual2]);
    else
      throw ParseError("edge with fewer than two real endpoints on both sides", rd.line_no);
    if (ed.dual1 != kGhost && ed.dual2 != kGhost) {
      ed.bisection_offset =
          length(ed.crossing - 0.5 * (m.dual_center[ed.dual1] + m.dual_center[ed.dual2]));
    } else {
      // reflected edge: the real dual mirrors across the crossing
      ed.bisection_offset = 0.0;
    }
    m.edge.push_back(ed);
  }
  // connectivity blocks are read for validation but rebuilt canonically
  {
    auto ls = expect_line("'connectivity'");
    if (!(ls >> word) || word != "connectivity")
      throw ParseError("expected 'connectivity' section", rd.line_no);
  }
  {
    auto ls = expect_line("'EC'");
    if (!(ls >> word) || word != "EC") throw ParseError("expected 'EC' block", rd.line_no);
  }
  std::vector<std::vector<int>> ec_file(m.n_c + m.n_cb);
  const long nel = static_cast<long>(m.n_e + m.n_eb);
  for (auto& row : ec_file) {
    auto ls = expect_line("EC row");
    long e;
    while (ls >> e) {
      if (e < 1 || e > nel) throw ParseError("EC entry out of range", rd.line_no);
      row.push_back(static_cast<int>(e) - 1);
    }
  }
  {
    auto ls = expect_line("'EV'");
    if (!(ls >> word) || word != "EV") throw ParseError("expected 'EV' block", rd.line_no);
  }
  std::vector<std::vector<int>> ev_file(m.n_v);
  for (auto& row : ev_file) {
    auto ls = expect_line("EV row");
    long e;
    while (ls >> e) {
      if (e < 1 || e > nel) throw ParseError("EV entry out of range", rd.line_no);
      row.push_back(static_cast<int>(e) - 1);
    }
  }

  // nominal resolution from the edge lengths
  double hi = 0.0;
  for (const Edge2D& e : m.edge) hi = std::max({hi, e.l_e, e.d_e});
  m.h = hi;
  m.domain_area = 0.0;
  for (double aa : m.cell_area) m.domain_area += aa;
  m.finalize();

  // cross-check the stored adjacency lists against the rebuilt ones
  for (std::size_t i = 0; i < ec_file.size(); ++i) {
    auto a = ec_file[i], b = m.EC[i];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ParseError("EC list inconsistent with edge records for cell " +
                                     std::to_string(i + 1), rd.line_no);
  }
  for (std::size_t v = 0; v < ev_file.size(); ++v) {
    auto a = ev_file[v], b = m.EV[v];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ParseError("EV list inconsistent with edge records for dual " +
                                     std::to_string(v + 1), rd.line_no);
  }

  if (!force) {
    const MeshQualityReport rep = validate(m);
    if (!rep.all_pass()) {
      std::string names;
      for (const auto& c : rep.checks)
        if (!c.pass) names += (names.empty() ? "" : ", ") + c.name;
      throw InvariantViolation("loaded mesh fails validation: " + names);
    }
  }
  return m;
}

}  // namespace stagfv
