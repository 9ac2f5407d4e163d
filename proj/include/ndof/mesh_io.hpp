#pragma once

// Mesh files. The native ASCII format:
//
//   # comment
//   <nv> <nf> [open]
//   x y z          (nv lines)
//   i j k          (nf lines, 0-based)
//
// OBJ import reads "v" and "f" records (1-based or negative indices,
// "i/t/n" forms, polygons fanned into triangles); everything else is skipped.

#include <iosfwd>
#include <string>

#include "ndof/geometry.hpp"

namespace ndof {

TriangleMesh read_tri(std::istream& in);
void write_tri(std::ostream& out, const TriangleMesh& mesh);

TriangleMesh read_obj(std::istream& in);
void write_obj(std::ostream& out, const TriangleMesh& mesh);

// Dispatches on the extension: ".obj" is OBJ, anything else the native
// format. Throws Io when the file cannot be opened, MalformedFile on syntax
// errors.
TriangleMesh load_mesh(const std::string& path);
void save_mesh(const std::string& path, const TriangleMesh& mesh);

}  // namespace ndof
