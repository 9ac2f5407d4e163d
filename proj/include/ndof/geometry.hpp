#pragma once

// Triangle meshes, shadow areas and the geometric NDoF estimators.

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ndof {

using Vec3 = Eigen::Vector3d;

class TriangleMesh {
 public:
  TriangleMesh() = default;
  // Throws InvalidArgument on out-of-range indices or degenerate triangles
  // (area <= 1e-12 a^2). `open_surface` marks sheets such as plates; their
  // surface area is reported single-sided.
  TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
               bool open_surface = false);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  bool empty() const { return triangles_.empty(); }
  bool open_surface() const { return open_; }

  // Smallest sphere enclosing all vertices.
  const Vec3& circumcenter() const { return center_; }
  double circumradius() const { return radius_; }

  double triangle_area(std::size_t i) const;
  Vec3 triangle_normal(std::size_t i) const;  // unit
  Vec3 triangle_centroid(std::size_t i) const;

  TriangleMesh transformed(const Eigen::Matrix3d& rotation, const Vec3& shift) const;
  TriangleMesh scaled(double factor) const;
  // Concatenates two meshes (e.g. disjoint bodies).
  TriangleMesh merged(const TriangleMesh& other) const;

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  bool open_ = false;
  Vec3 center_ = Vec3::Zero();
  double radius_ = 0.0;
};

struct Sphere {
  Vec3 center;
  double radius;
};

// Exact minimum enclosing sphere (move-to-front Welzl).
Sphere min_enclosing_sphere(const std::vector<Vec3>& points);

struct DirectionQuadrature {
  std::vector<Vec3> directions;
  std::vector<double> weights;  // sum to one

  // Fibonacci lattice with equal weights.
  static DirectionQuadrature fibonacci(std::size_t n = 590);
  void validate() const;
};

double surface_area(const TriangleMesh& mesh);

// Area of the orthographic silhouette seen along `direction`, by rasterizing
// every triangle onto a grid with `resolution` pixels per circumradius and
// counting covered pixels once.
double shadow_area(const TriangleMesh& mesh, const Vec3& direction, int resolution = 512);

struct ShadowAverage {
  double average = 0.0;  // <A_s>
  double total = 0.0;    // 4 pi <A_s>
  std::vector<double> per_direction;
};

ShadowAverage average_shadow_area(const TriangleMesh& mesh, const DirectionQuadrature& quad,
                                  int resolution = 512);

// 4 <A_s> / A: one for convex bodies, smaller otherwise.
double convexity_gap(const TriangleMesh& mesh, const DirectionQuadrature& quad,
                     int resolution = 512);

struct PolarSweep {
  std::vector<double> theta;
  std::vector<double> area;
  double average = 0.0;  // sin(theta)-weighted mean over [0, pi/2]
};

// A_s(theta) for a body of revolution about z, sampled at midpoints of
// n_theta equal steps in [0, pi/2].
PolarSweep polar_sweep(const TriangleMesh& mesh, int n_theta = 90, int resolution = 512);

// Weyl-law mode counts: 2 l/lambda (line), pi A/lambda^2 (scalar aperture),
// 2 pi A/lambda^2 (two polarizations).
double weyl_estimate(int dimension, double measure, double wavelength, bool electromagnetic);

// 8 pi <A_s> / lambda^2
double asymptotic_ndof(double avg_shadow, double wavelength);

// Average shadow area of an oblate spheroid with equatorial radius a and
// axis ratio xi in [0, 1).
double oblate_spheroid_avg_shadow(double a, double xi);

}  // namespace ndof
