#include "ndof/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

namespace {

using Profile = std::vector<std::array<double, 2>>;

constexpr double kAxisTol = 1e-12;

void check_edge(double max_edge) {
  require(max_edge > 0.0 && max_edge <= 1.0, ErrorCode::InvalidArgument,
          "max_edge must lie in (0, 1]");
}

// Arc of the ellipse (rho, z) = (a sin t, c cos t) for t in [t0, t1].
void append_arc(Profile& p, double a, double c, double z0, double t0, double t1, double max_edge,
                bool skip_first) {
  const double len = std::max(a, c) * std::abs(t1 - t0);
  const int n = std::max(2, static_cast<int>(std::ceil(len / max_edge)));
  for (int i = skip_first ? 1 : 0; i <= n; ++i) {
    const double t = t0 + (t1 - t0) * i / n;
    double rho = a * std::sin(t);
    if (std::abs(rho) < 1e-14) rho = 0.0;
    p.push_back({rho, z0 + c * std::cos(t)});
  }
}

}  // namespace

TriangleMesh revolve(const Profile& profile, bool closed_loop, double max_edge) {
  require(profile.size() >= 2, ErrorCode::InvalidArgument, "profile needs two points");
  require(max_edge > 0.0, ErrorCode::InvalidArgument, "max_edge must be positive");
  for (const auto& q : profile)
    require(q[0] >= 0.0 && std::isfinite(q[0]) && std::isfinite(q[1]),
            ErrorCode::InvalidArgument, "profile radii must be finite and non-negative");
  if (closed_loop) {
    for (const auto& q : profile)
      require(q[0] > kAxisTol, ErrorCode::InvalidArgument, "closed profile touches the axis");
  } else {
    require(profile.front()[0] <= kAxisTol && profile.back()[0] <= kAxisTol,
            ErrorCode::InvalidArgument, "open profile must start and end on the axis");
  }

  // Resample so that no meridional edge exceeds max_edge.
  Profile pts;
  const std::size_t nseg = closed_loop ? profile.size() : profile.size() - 1;
  for (std::size_t s = 0; s < nseg; ++s) {
    const auto& p = profile[s];
    const auto& q = profile[(s + 1) % profile.size()];
    const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
    if (len == 0.0) continue;
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_edge)));
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / n;
      pts.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
    }
  }
  if (!closed_loop) pts.push_back(profile.back());

  double rmax = 0.0;
  for (const auto& q : pts) rmax = std::max(rmax, q[0]);
  const int nphi = std::max(16, static_cast<int>(std::ceil(2 * kPi * rmax / max_edge)));

  std::vector<Vec3> verts;
  std::vector<std::vector<int>> rings(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double rho = pts[i][0], z = pts[i][1];
    if (rho <= kAxisTol) {
      rings[i].push_back(static_cast<int>(verts.size()));
      verts.emplace_back(0.0, 0.0, z);
      continue;
    }
    for (int j = 0; j < nphi; ++j) {
      const double phi = 2 * kPi * j / nphi;
      rings[i].push_back(static_cast<int>(verts.size()));
      verts.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
    }
  }

  std::vector<std::array<int, 3>> tris;
  const std::size_t nlinks = closed_loop ? pts.size() : pts.size() - 1;
  for (std::size_t s = 0; s < nlinks; ++s) {
    const auto& A = rings[s];
    const auto& B = rings[(s + 1) % pts.size()];
    if (A.size() == 1 && B.size() == 1) continue;
    for (int j = 0; j < nphi; ++j) {
      const int jn = (j + 1) % nphi;
      if (A.size() == 1) {
        tris.push_back({A[0], B[jn], B[j]});
      } else if (B.size() == 1) {
        tris.push_back({A[j], A[jn], B[0]});
      } else {
        tris.push_back({A[j], B[jn], B[j]});
        tris.push_back({A[j], A[jn], B[jn]});
      }
    }
  }
  return TriangleMesh(std::move(verts), std::move(tris));
}

TriangleMesh normalize_circumradius(const TriangleMesh& mesh) {
  require(!mesh.empty(), ErrorCode::InvalidArgument, "cannot normalize an empty mesh");
  const double s = 1.0 / mesh.circumradius();
  return mesh.transformed(Eigen::Matrix3d::Identity() * s, -s * mesh.circumcenter());
}

TriangleMesh icosphere(double radius, int subdivisions) {
  require(radius > 0.0, ErrorCode::InvalidArgument, "radius must be positive");
  require(subdivisions >= 0 && subdivisions <= 8, ErrorCode::InvalidArgument,
          "subdivisions must lie in [0, 8]");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int ab = midpoint(tri[0], tri[1]);
      const int bc = midpoint(tri[1], tri[2]);
      const int ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (auto& p : v) p *= radius;
  return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh cylinder(double h_over_r, double max_edge) {
  require(h_over_r > 0.0, ErrorCode::InvalidArgument, "h/r must be positive");
  check_edge(max_edge);
  const double r = 1.0 / std::sqrt(1.0 + h_over_r * h_over_r / 4.0);
  const double h = h_over_r * r;
  return normalize_circumradius(
      revolve({{0, -h / 2}, {r, -h / 2}, {r, h / 2}, {0, h / 2}}, false, max_edge));
}

TriangleMesh open_cylinder(double h_over_r, double inner_ratio, double max_edge) {
  require(h_over_r > 0.0, ErrorCode::InvalidArgument, "h/r must be positive");
  require(inner_ratio > 0.0 && inner_ratio < 1.0, ErrorCode::InvalidArgument,
          "inner radius ratio must lie in (0, 1)");
  check_edge(max_edge);
  const double r = 1.0 / std::sqrt(1.0 + h_over_r * h_over_r / 4.0);
  const double h = h_over_r * r, ri = inner_ratio * r;
  return normalize_circumradius(
      revolve({{ri, -h / 2}, {r, -h / 2}, {r, h / 2}, {ri, h / 2}}, true, max_edge));
}

TriangleMesh corrugated_cylinder(double h_over_r, double groove_ratio, int discs,
                                 double max_edge) {
  require(h_over_r > 0.0, ErrorCode::InvalidArgument, "h/r must be positive");
  require(groove_ratio > 0.0 && groove_ratio < 1.0, ErrorCode::InvalidArgument,
          "groove radius ratio must lie in (0, 1)");
  require(discs >= 2, ErrorCode::InvalidArgument, "need at least two discs");
  check_edge(max_edge);
  const double r = 1.0 / std::sqrt(1.0 + h_over_r * h_over_r / 4.0);
  const double h = h_over_r * r;
  const int layers = 2 * discs - 1;
  const double dz = h / layers;
  Profile p{{0, -h / 2}};
  for (int i = 0; i < layers; ++i) {
    const double rho = (i % 2 == 0) ? r : groove_ratio * r;
    p.push_back({rho, -h / 2 + i * dz});
    p.push_back({rho, -h / 2 + (i + 1) * dz});
  }
  p.push_back({0, h / 2});
  return normalize_circumradius(revolve(p, false, max_edge));
}

TriangleMesh connected_discs(double h_over_r, double disc_ratio, double rod_ratio,
                             double max_edge) {
  require(h_over_r > 0.0, ErrorCode::InvalidArgument, "h/r must be positive");
  require(disc_ratio > 0.0 && 2 * disc_ratio < h_over_r, ErrorCode::InvalidArgument,
          "disc thickness must be positive and leave room for the rod");
  require(rod_ratio > 0.0 && rod_ratio < 1.0, ErrorCode::InvalidArgument,
          "rod radius ratio must lie in (0, 1)");
  check_edge(max_edge);
  const double r = 1.0 / std::sqrt(1.0 + h_over_r * h_over_r / 4.0);
  const double h = h_over_r * r, t = disc_ratio * r, q = rod_ratio * r;
  return normalize_circumradius(revolve({{0, -h / 2},
                                         {r, -h / 2},
                                         {r, -h / 2 + t},
                                         {q, -h / 2 + t},
                                         {q, h / 2 - t},
                                         {r, h / 2 - t},
                                         {r, h / 2},
                                         {0, h / 2}},
                                        false, max_edge));
}

TriangleMesh solid_hemisphere(double max_edge) {
  check_edge(max_edge);
  Profile p{{0, 0}, {1, 0}};
  append_arc(p, 1.0, 1.0, 0.0, kPi / 2, 0.0, max_edge, true);
  return normalize_circumradius(revolve(p, false, max_edge));
}

TriangleMesh bowl(double thickness, double max_edge) {
  require(thickness > 0.0 && thickness < 1.0, ErrorCode::InvalidArgument,
          "bowl wall thickness must lie in (0, 1)");
  check_edge(max_edge);
  const double ri = 1.0 - thickness;
  Profile p;
  append_arc(p, 1.0, 1.0, 0.0, kPi, kPi / 2, max_edge, false);
  append_arc(p, ri, ri, 0.0, kPi / 2, kPi, max_edge, false);
  return normalize_circumradius(revolve(p, false, max_edge));
}

TriangleMesh oblate_spheroid(double xi, double max_edge) {
  require(xi > 0.0 && xi <= 1.0, ErrorCode::InvalidArgument, "axis ratio must lie in (0, 1]");
  check_edge(max_edge);
  Profile p;
  append_arc(p, 1.0, xi, 0.0, kPi, 0.0, max_edge, false);
  return normalize_circumradius(revolve(p, false, max_edge));
}

TriangleMesh square_plate(double side, int cells) {
  require(side > 0.0, ErrorCode::InvalidArgument, "plate side must be positive");
  require(cells >= 1 && cells <= 4096, ErrorCode::InvalidArgument, "plate cells out of range");
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
  const int n = cells + 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v.emplace_back(side * (static_cast<double>(j) / cells - 0.5),
                     side * (static_cast<double>(i) / cells - 0.5), 0.0);
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const int a = i * n + j, b = a + 1, c = a + n, d = c + 1;
      f.push_back({a, b, d});
      f.push_back({a, d, c});
    }
  return TriangleMesh(std::move(v), std::move(f), true);
}

TriangleMesh two_plates(double side, double separation, int cells) {
  require(separation > 0.0, ErrorCode::InvalidArgument, "plate separation must be positive");
  const TriangleMesh p = square_plate(side, cells);
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  return p.transformed(I, Vec3(0, 0, -separation / 2))
      .merged(p.transformed(I, Vec3(0, 0, separation / 2)));
}

const std::vector<std::string>& builtin_shape_names() {
  static const std::vector<std::string> names = {
      "sphere",          "cylinder",   "disc", "open-cylinder", "corrugated-cylinder",
      "connected-discs", "hemisphere", "bowl", "spheroid",      "plate",
      "two-plates"};
  return names;
}

TriangleMesh builtin_shape(std::string_view name, const ShapeOptions& o) {
  check_edge(o.max_edge);
  if (name == "sphere") {
    // Icosahedron edge ~1.05; each level halves it.
    const int level = std::clamp(static_cast<int>(std::ceil(std::log2(1.05 / o.max_edge))), 0, 7);
    return icosphere(1.0, level);
  }
  if (name == "cylinder") return cylinder(1.0, o.max_edge);
  if (name == "disc") return cylinder(0.05, std::min(o.max_edge, 0.025));
  if (name == "open-cylinder") return open_cylinder(1.0, 0.95, o.max_edge);
  if (name == "corrugated-cylinder") return corrugated_cylinder(4.0 / 3.0, 0.5, 5, o.max_edge);
  if (name == "connected-discs") return connected_discs(1.0, 0.1, 0.1, o.max_edge);
  if (name == "hemisphere") return solid_hemisphere(o.max_edge);
  if (name == "bowl") return bowl(0.1, o.max_edge);
  if (name == "spheroid") return oblate_spheroid(o.xi, o.max_edge);
  if (name == "plate") return square_plate(o.side, o.plate_cells);
  if (name == "two-plates") return two_plates(o.side, o.separation, o.plate_cells);
  fail(ErrorCode::InvalidArgument, "unknown shape '" + std::string(name) + "'");
}

}  // namespace ndof
