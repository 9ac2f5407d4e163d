#pragma once

// Binary container for complex matrices (see docs/formats.md):
//
//   "NDOFMAT1"            8 bytes
//   version  uint32       currently 1
//   count    uint32       number of matrices
//   per matrix:
//     name_len uint32, name bytes (UTF-8, no terminator)
//     dim      uint64     square dimension
//     flags    uint8      bit 0: Hermitian
//     pad      7 bytes    zero
//     data     dim*dim pairs of float64 (re, im), row-major
//
// All integers and floats are little-endian.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ndof/modes.hpp"

namespace ndof {

constexpr std::uint32_t kMatrixFormatVersion = 1;

struct NamedMatrix {
  std::string name;
  Eigen::MatrixXcd data;
  bool hermitian = false;
};

void write_matrices(std::ostream& out, const std::vector<NamedMatrix>& matrices);
// Throws MalformedFile on bad magic, unsupported version, truncation or
// trailing bytes.
std::vector<NamedMatrix> read_matrices(std::istream& in);

// A pair is stored as two Hermitian matrices named "R0" and "Rrho".
void save_pair(const std::string& path, const ResistancePair& pair);
// Validates shapes (DimensionMismatch), Hermiticity (InvalidArgument) and
// positive definiteness of Rrho (NotPositiveDefinite).
ResistancePair ingest_pair(const std::string& path);
ResistancePair ingest_pair(std::istream& in);

}  // namespace ndof
