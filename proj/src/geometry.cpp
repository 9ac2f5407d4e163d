#include "ndof/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <list>
#include <numeric>
#include <random>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

// ---------------------------------------------------------------------------
// Minimum enclosing sphere

namespace {

Sphere sphere_from(const std::vector<Vec3>& s);

Sphere sphere2(const Vec3& a, const Vec3& b) { return {(a + b) / 2, (a - b).norm() / 2}; }

Sphere sphere3(const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a;
  const Vec3 n = ab.cross(ac);
  const double n2 = n.squaredNorm();
  if (n2 < 1e-30 * ab.squaredNorm() * ac.squaredNorm() || n2 == 0.0) {
    Sphere best = sphere2(a, b);
    for (const Sphere& s : {sphere2(a, c), sphere2(b, c)})
      if (s.radius > best.radius) best = s;
    return best;
  }
  const Vec3 off = (ac.squaredNorm() * n.cross(ab) + ab.squaredNorm() * ac.cross(n)) / (2 * n2);
  return {a + off, off.norm()};
}

Sphere sphere4(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Eigen::Matrix3d M;
  M.row(0) = (b - a).transpose();
  M.row(1) = (c - a).transpose();
  M.row(2) = (d - a).transpose();
  const Vec3 rhs(0.5 * (b - a).squaredNorm(), 0.5 * (c - a).squaredNorm(),
                 0.5 * (d - a).squaredNorm());
  const double det = M.determinant();
  const double scale = (b - a).norm() * (c - a).norm() * (d - a).norm();
  if (std::abs(det) < 1e-14 * scale) {
    Sphere best = sphere3(a, b, c);
    for (const Sphere& s : {sphere3(a, b, d), sphere3(a, c, d), sphere3(b, c, d)})
      if (s.radius > best.radius) best = s;
    return best;
  }
  const Vec3 off = M.partialPivLu().solve(rhs);
  return {a + off, off.norm()};
}

Sphere sphere_from(const std::vector<Vec3>& s) {
  switch (s.size()) {
    case 0: return {Vec3::Zero(), -1.0};
    case 1: return {s[0], 0.0};
    case 2: return sphere2(s[0], s[1]);
    case 3: return sphere3(s[0], s[1], s[2]);
    default: return sphere4(s[0], s[1], s[2], s[3]);
  }
}

bool inside(const Sphere& s, const Vec3& p) {
  if (s.radius < 0.0) return false;
  return (p - s.center).norm() <= s.radius * (1.0 + 1e-12) + 1e-300;
}

Sphere mtf(std::list<Vec3>& pts, std::list<Vec3>::iterator end, std::vector<Vec3>& support) {
  Sphere ball = sphere_from(support);
  if (support.size() == 4) return ball;
  for (auto it = pts.begin(); it != end;) {
    auto cur = it++;
    if (!inside(ball, *cur)) {
      support.push_back(*cur);
      ball = mtf(pts, cur, support);
      support.pop_back();
      pts.splice(pts.begin(), pts, cur);
    }
  }
  return ball;
}

}  // namespace

Sphere min_enclosing_sphere(const std::vector<Vec3>& points) {
  require(!points.empty(), ErrorCode::InvalidArgument, "no points");
  std::vector<Vec3> shuffled = points;
  std::mt19937_64 rng(0x5eed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::list<Vec3> pts(shuffled.begin(), shuffled.end());
  std::vector<Vec3> support;
  Sphere s = mtf(pts, pts.end(), support);
  // Guard against round-off in the support computation.
  double r = s.radius;
  for (const Vec3& p : points) r = std::max(r, (p - s.center).norm());
  s.radius = r;
  return s;
}

// ---------------------------------------------------------------------------
// TriangleMesh

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                           bool open_surface)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), open_(open_surface) {
  for (const auto& v : vertices_)
    require(v.allFinite(), ErrorCode::InvalidArgument, "mesh vertex is not finite");
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& t : triangles_)
    for (int i : t)
      require(i >= 0 && i < nv, ErrorCode::InvalidArgument, "triangle index out of range");
  if (vertices_.empty()) return;
  const Sphere s = min_enclosing_sphere(vertices_);
  center_ = s.center;
  radius_ = s.radius;
  const double amin = 1e-12 * radius_ * radius_;
  for (std::size_t i = 0; i < triangles_.size(); ++i)
    require(triangle_area(i) > amin, ErrorCode::InvalidArgument,
            "degenerate triangle " + std::to_string(i));
}

double TriangleMesh::triangle_area(std::size_t i) const {
  const auto& t = triangles_[i];
  return 0.5 * (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]).norm();
}

Vec3 TriangleMesh::triangle_normal(std::size_t i) const {
  const auto& t = triangles_[i];
  return (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]).normalized();
}

Vec3 TriangleMesh::triangle_centroid(std::size_t i) const {
  const auto& t = triangles_[i];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

TriangleMesh TriangleMesh::transformed(const Eigen::Matrix3d& rotation, const Vec3& shift) const {
  std::vector<Vec3> v(vertices_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rotation * vertices_[i] + shift;
  return TriangleMesh(std::move(v), triangles_, open_);
}

TriangleMesh TriangleMesh::scaled(double factor) const {
  require(factor > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
  return transformed(Eigen::Matrix3d::Identity() * factor, Vec3::Zero());
}

TriangleMesh TriangleMesh::merged(const TriangleMesh& other) const {
  std::vector<Vec3> v = vertices_;
  v.insert(v.end(), other.vertices_.begin(), other.vertices_.end());
  std::vector<std::array<int, 3>> t = triangles_;
  const int off = static_cast<int>(vertices_.size());
  for (auto tri : other.triangles_) t.push_back({tri[0] + off, tri[1] + off, tri[2] + off});
  return TriangleMesh(std::move(v), std::move(t), open_ || other.open_);
}

// ---------------------------------------------------------------------------
// Quadrature

DirectionQuadrature DirectionQuadrature::fibonacci(std::size_t n) {
  require(n >= 1, ErrorCode::InvalidArgument, "quadrature needs at least one direction");
  DirectionQuadrature q;
  q.directions.reserve(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    q.directions.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
  }
  q.weights.assign(n, 1.0 / static_cast<double>(n));
  return q;
}

void DirectionQuadrature::validate() const {
  require(!directions.empty() && directions.size() == weights.size(),
          ErrorCode::InvalidArgument, "quadrature needs one weight per direction");
  double sum = 0.0;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    require(std::abs(directions[i].norm() - 1.0) <= 1e-12, ErrorCode::InvalidArgument,
            "quadrature directions must be unit vectors");
    require(weights[i] > 0.0, ErrorCode::InvalidArgument, "quadrature weights must be positive");
    sum += weights[i];
  }
  require(std::abs(sum - 1.0) <= 1e-10, ErrorCode::InvalidArgument,
          "quadrature weights must sum to one");
}

// ---------------------------------------------------------------------------
// Areas

double surface_area(const TriangleMesh& mesh) {
  require(!mesh.empty(), ErrorCode::InvalidArgument, "surface_area: empty mesh");
  double a = 0.0;
  for (std::size_t i = 0; i < mesh.triangles().size(); ++i) a += mesh.triangle_area(i);
  return a;
}

namespace {

class ShadowRasterizer {
 public:
  ShadowRasterizer(const TriangleMesh& mesh, int resolution)
      : mesh_(mesh), res_(resolution), n_(2 * resolution) {
    require(resolution >= 1, ErrorCode::InvalidArgument, "shadow resolution must be positive");
    require(!mesh.empty(), ErrorCode::InvalidArgument, "shadow_area: empty mesh");
    half_ = mesh.circumradius();
    h_ = half_ / res_;
    grid_.resize(static_cast<std::size_t>(n_) * n_);
    proj_.resize(mesh.vertices().size());
  }

  double area(const Vec3& direction) {
    const double dn = direction.norm();
    require(dn > 0.0 && std::isfinite(dn), ErrorCode::InvalidArgument,
            "shadow direction must be nonzero");
    const Vec3 d = direction / dn;
    const Vec3 helper = std::abs(d.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = d.cross(helper).normalized();
    const Vec3 e2 = d.cross(e1);
    const Vec3& c = mesh_.circumcenter();
    for (std::size_t i = 0; i < proj_.size(); ++i) {
      const Vec3 p = mesh_.vertices()[i] - c;
      proj_[i] = {p.dot(e1), p.dot(e2)};
    }
    std::fill(grid_.begin(), grid_.end(), 0);
    for (const auto& t : mesh_.triangles()) fill_triangle(proj_[t[0]], proj_[t[1]], proj_[t[2]]);
    const auto covered = std::count(grid_.begin(), grid_.end(), 1);
    return static_cast<double>(covered) * h_ * h_;
  }

 private:
  using P2 = std::array<double, 2>;

  // Marks pixels whose centres lie inside the (closed) projected triangle.
  void fill_triangle(const P2& a, const P2& b, const P2& c) {
    const double ymin = std::min({a[1], b[1], c[1]});
    const double ymax = std::max({a[1], b[1], c[1]});
    const int row0 = std::max(0, static_cast<int>(std::ceil((ymin + half_) / h_ - 0.5)));
    const int row1 = std::min(n_ - 1, static_cast<int>(std::floor((ymax + half_) / h_ - 0.5)));
    const P2* edges[3][2] = {{&a, &b}, {&b, &c}, {&c, &a}};
    for (int row = row0; row <= row1; ++row) {
      const double y = -half_ + (row + 0.5) * h_;
      double xlo = std::numeric_limits<double>::infinity();
      double xhi = -xlo;
      for (const auto& e : edges) {
        const P2& p = *e[0];
        const P2& q = *e[1];
        const double lo = std::min(p[1], q[1]), hi = std::max(p[1], q[1]);
        if (y < lo || y > hi) continue;
        if (hi == lo) {
          xlo = std::min({xlo, p[0], q[0]});
          xhi = std::max({xhi, p[0], q[0]});
          continue;
        }
        const double x = p[0] + (y - p[1]) * (q[0] - p[0]) / (q[1] - p[1]);
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
      }
      if (!(xlo <= xhi)) continue;
      const int col0 = std::max(0, static_cast<int>(std::ceil((xlo + half_) / h_ - 0.5)));
      const int col1 = std::min(n_ - 1, static_cast<int>(std::floor((xhi + half_) / h_ - 0.5)));
      if (col0 > col1) continue;
      std::memset(&grid_[static_cast<std::size_t>(row) * n_ + col0], 1,
                  static_cast<std::size_t>(col1 - col0 + 1));
    }
  }

  const TriangleMesh& mesh_;
  int res_;
  int n_;
  double half_ = 0.0;
  double h_ = 0.0;
  std::vector<unsigned char> grid_;
  std::vector<P2> proj_;
};

}  // namespace

double shadow_area(const TriangleMesh& mesh, const Vec3& direction, int resolution) {
  require(resolution > 0, ErrorCode::InvalidArgument, "shadow resolution must be positive");
  ShadowRasterizer r(mesh, resolution);
  return r.area(direction);
}

ShadowAverage average_shadow_area(const TriangleMesh& mesh, const DirectionQuadrature& quad,
                                  int resolution) {
  quad.validate();
  require(resolution > 0, ErrorCode::InvalidArgument, "shadow resolution must be positive");
  require(!mesh.empty(), ErrorCode::InvalidArgument, "shadow_area: empty mesh");
  ShadowAverage out;
  const auto n = static_cast<long>(quad.directions.size());
  out.per_direction.assign(quad.directions.size(), 0.0);
#pragma omp parallel
  {
    ShadowRasterizer r(mesh, resolution);
#pragma omp for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i)
      out.per_direction[static_cast<std::size_t>(i)] = r.area(quad.directions[static_cast<std::size_t>(i)]);
  }
  for (std::size_t i = 0; i < quad.directions.size(); ++i)
    out.average += quad.weights[i] * out.per_direction[i];
  out.total = 4.0 * kPi * out.average;
  return out;
}

double convexity_gap(const TriangleMesh& mesh, const DirectionQuadrature& quad, int resolution) {
  return 4.0 * average_shadow_area(mesh, quad, resolution).average / surface_area(mesh);
}

PolarSweep polar_sweep(const TriangleMesh& mesh, int n_theta, int resolution) {
  require(n_theta >= 1, ErrorCode::InvalidArgument, "polar sweep needs at least one angle");
  PolarSweep out;
  const double dtheta = kPi / 2 / n_theta;
  out.theta.resize(static_cast<std::size_t>(n_theta));
  out.area.resize(static_cast<std::size_t>(n_theta));
#pragma omp parallel
  {
    ShadowRasterizer r(mesh, resolution);
#pragma omp for schedule(dynamic, 2)
    for (int i = 0; i < n_theta; ++i) {
      const double th = (i + 0.5) * dtheta;
      out.theta[static_cast<std::size_t>(i)] = th;
      out.area[static_cast<std::size_t>(i)] = r.area(Vec3(std::sin(th), 0.0, std::cos(th)));
    }
  }
  double wsum = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double w = std::sin(out.theta[static_cast<std::size_t>(i)]);
    out.average += w * out.area[static_cast<std::size_t>(i)];
    wsum += w;
  }
  out.average /= wsum;
  return out;
}

double weyl_estimate(int dimension, double measure, double wavelength, bool electromagnetic) {
  require(measure > 0.0 && wavelength > 0.0, ErrorCode::InvalidArgument,
          "Weyl estimate needs positive measure and wavelength");
  switch (dimension) {
    case 1: return (electromagnetic ? 2.0 : 1.0) * 2.0 * measure / wavelength;
    case 2:
      return (electromagnetic ? 2.0 : 1.0) * kPi * measure / (wavelength * wavelength);
    default: fail(ErrorCode::InvalidArgument, "Weyl estimate supports dimension 1 or 2");
  }
}

double asymptotic_ndof(double avg_shadow, double wavelength) {
  require(avg_shadow > 0.0 && wavelength > 0.0, ErrorCode::InvalidArgument,
          "asymptotic NDoF needs positive shadow area and wavelength");
  return 8.0 * kPi * avg_shadow / (wavelength * wavelength);
}

double oblate_spheroid_avg_shadow(double a, double xi) {
  require(a > 0.0, ErrorCode::InvalidArgument, "radius must be positive");
  require(xi >= 0.0 && xi < 1.0, ErrorCode::InvalidArgument,
          "axis ratio must lie in [0, 1); use the sphere for xi = 1");
  const double base = kPi * a * a / 2.0;
  if (xi == 0.0) return base;
  const double e = std::sqrt((1.0 - xi) * (1.0 + xi));
  // ln((1+e)/(1-e)) / (4e) = atanh(e) / (2e)
  const double ratio = e < 1e-8 ? 0.5 * (1.0 + e * e / 3.0) : std::atanh(e) / (2.0 * e);
  return base + kPi * a * a * xi * xi * ratio;
}

}  // namespace ndof
