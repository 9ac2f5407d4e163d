#pragma once

// Procedural meshes. The named bodies are scaled to unit circumradius and
// centred on the origin; plates keep their physical side length.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "ndof/geometry.hpp"

namespace ndof {

// (rho, z) profile of a body of revolution about z. An open profile must
// start and end on the axis (rho = 0); a closed profile is a loop that never
// touches the axis (e.g. a pipe wall). Segments are split so that no edge is
// longer than `max_edge`. Profiles run counter-clockwise in the (rho, z)
// half plane (bottom, out, top) so that triangle normals point outward.
TriangleMesh revolve(const std::vector<std::array<double, 2>>& profile, bool closed_loop,
                     double max_edge);

// Recentres on the circumcentre and scales to unit circumradius.
TriangleMesh normalize_circumradius(const TriangleMesh& mesh);

TriangleMesh icosphere(double radius, int subdivisions);

// Solid cylinder with height/radius ratio h_over_r.
TriangleMesh cylinder(double h_over_r, double max_edge = 0.05);
// Pipe open at both ends: wall from inner_ratio*r to r, height h_over_r*r.
TriangleMesh open_cylinder(double h_over_r, double inner_ratio, double max_edge = 0.05);
// Stack of `discs` full-radius discs separated by grooves of radius
// groove_ratio*r, all layers of equal height.
TriangleMesh corrugated_cylinder(double h_over_r, double groove_ratio, int discs,
                                 double max_edge = 0.05);
// Two end discs of thickness disc_ratio*r joined by an axial rod of radius
// rod_ratio*r.
TriangleMesh connected_discs(double h_over_r, double disc_ratio, double rod_ratio,
                             double max_edge = 0.05);
TriangleMesh solid_hemisphere(double max_edge = 0.05);
// Hemispherical shell with the given wall thickness (fraction of radius).
TriangleMesh bowl(double thickness, double max_edge = 0.05);
// Oblate spheroid with axis ratio xi (polar/equatorial), 0 < xi <= 1.
TriangleMesh oblate_spheroid(double xi, double max_edge = 0.05);

// Square plate of side `side` in the z = 0 plane, n x n cells (open surface).
TriangleMesh square_plate(double side, int cells);
// Two parallel square plates at z = -d/2 and z = +d/2.
TriangleMesh two_plates(double side, double separation, int cells);

struct ShapeOptions {
  double max_edge = 0.05;   // relative to the circumradius
  double xi = 0.5;          // spheroid axis ratio
  double side = 1.0;        // plate side length
  double separation = 0.5;  // two-plate separation
  int plate_cells = 16;
};

// Named shapes: sphere, cylinder, disc, open-cylinder, corrugated-cylinder,
// connected-discs, hemisphere, bowl, spheroid, plate, two-plates.
TriangleMesh builtin_shape(std::string_view name, const ShapeOptions& options = {});
const std::vector<std::string>& builtin_shape_names();

}  // namespace ndof
