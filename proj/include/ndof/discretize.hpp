#pragma once

// Point-dipole discretization of a surface (or onion-layered volume) and the
// resistance matrices it induces:
//   R0   = U^H U            (U from the regular spherical waves)
//   Rrho = diag(loss * w)   (R_s for sheets, rho_r for bulk)
// Points sit at centroids of a uniformly subdivided mesh; the weight of a
// point is the area (or volume) it represents.

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "ndof/geometry.hpp"
#include "ndof/modes.hpp"
#include "ndof/sphwave.hpp"

namespace ndof {

constexpr double kDefaultDensity = 16.0;  // points per wavelength^2
constexpr double kMinDensity = 8.0;

struct Discretization {
  std::vector<Vec3> points;
  std::vector<double> weights;
  // Current directions per point: two tangents for sheets, plus the normal
  // for volume layers (directions_per_point == 3).
  std::vector<Vec3> tangent1;
  std::vector<Vec3> tangent2;
  int directions_per_point = 2;
  Vec3 origin = Vec3::Zero();  // expansion centre for the spherical waves
  LossModel loss;
  double k = 0.0;
  double achieved_density = 0.0;  // points per wavelength^2 of surface
  bool low_density = false;
  bool approximate_volume = false;
  int layers = 0;

  std::size_t size() const { return points.size(); }
  Eigen::Index unknowns() const {
    return static_cast<Eigen::Index>(points.size()) * directions_per_point;
  }
  double total_weight() const;
  double wavelength() const;
  double ka(double circumradius) const { return k * circumradius; }
};

// Triangles larger than a quarter cell (cell = lambda^2/density) are split
// into n^2 congruent pieces, n = ceil(sqrt(area/cell)), one point per piece.
// Smaller triangles are pooled into roughly cell-sized patches, so a fine
// geometric mesh does not inflate the point count; each patch contributes
// one point at a member centroid with the patch area as its weight.
Discretization sample_mesh(const TriangleMesh& mesh, double k, double density = kDefaultDensity,
                           const LossModel& loss = LossModel::surface(1e-5));

// Volume approximation for star-shaped bodies: `layers` scaled copies of the
// boundary sample, weighted by the cone volume each point represents, with
// three current directions per point.
Discretization sample_volume(const TriangleMesh& mesh, double k, int layers,
                             double density = kDefaultDensity,
                             const LossModel& loss = LossModel::volume(1e-5));

// Absolute edge length for a base mesh whose triangles hold about one
// point at `density`.
double edge_for_density(double wavelength, double density);

// Diagonal of Rrho (Ohm m^2 for sheets, Ohm m^4 for volumes per unit
// current density squared), one entry per unknown.
Eigen::VectorXd loss_diagonal(const Discretization& disc);
Eigen::MatrixXcd loss_matrix(const Discretization& disc);

// Gram matrix of the basis (the weights), one entry per unknown.
Eigen::VectorXd gram_diagonal(const Discretization& disc);

// Wave-projection matrix (modes x unknowns) about disc.origin.
Eigen::MatrixXcd wave_matrix(const Discretization& disc, int lmax);
Eigen::MatrixXcd radiation_matrix(const Discretization& disc, int lmax);

ResistancePair assemble_pair(const Discretization& disc, int lmax);

// Radiation modes of the discretization through the reduced
// (modes x modes) problem; identical nonzero spectrum to assemble_pair.
RadiationModes discretized_modes(const Discretization& disc, int lmax, double circumradius);

// Samples a current field J(r) into the basis (tangential projection).
Eigen::VectorXcd sample_current(const Discretization& disc,
                                const std::vector<Eigen::Vector3cd>& field_at_points);

// CSV with header x,y,z,weight,t1x,t1y,t1z,t2x,t2y,t2z.
void write_discretization_csv(std::ostream& out, const Discretization& disc);

}  // namespace ndof
