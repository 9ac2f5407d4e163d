#include "ndof/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "ndof/error.hpp"

namespace ndof {

namespace {

constexpr char kMagic[8] = {'N', 'D', 'O', 'F', 'M', 'A', 'T', '1'};
constexpr std::uint64_t kMaxDim = 1u << 16;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

template <class T>
void put(std::ostream& out, T v) {
  v = to_little(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const char* what) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    fail(ErrorCode::MalformedFile, std::string("truncated matrix file while reading ") + what);
  return to_little(v);
}

// Bytes left in a seekable stream, or -1 when unknown.
std::streamoff remaining(std::istream& in) {
  const auto here = in.tellg();
  if (here < 0) return -1;
  in.seekg(0, std::ios::end);
  const auto end = in.tellg();
  in.seekg(here);
  return end < 0 ? -1 : static_cast<std::streamoff>(end - here);
}

}  // namespace

void write_matrices(std::ostream& out, const std::vector<NamedMatrix>& matrices) {
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kMatrixFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(matrices.size()));
  for (const auto& m : matrices) {
    require(m.data.rows() == m.data.cols(), ErrorCode::DimensionMismatch,
            "matrix '" + m.name + "' is not square");
    put<std::uint32_t>(out, static_cast<std::uint32_t>(m.name.size()));
    out.write(m.name.data(), static_cast<std::streamsize>(m.name.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.data.rows()));
    put<std::uint8_t>(out, m.hermitian ? 1 : 0);
    const char pad[7] = {};
    out.write(pad, sizeof pad);
    for (Eigen::Index i = 0; i < m.data.rows(); ++i)
      for (Eigen::Index j = 0; j < m.data.cols(); ++j) {
        put<double>(out, m.data(i, j).real());
        put<double>(out, m.data(i, j).imag());
      }
  }
  require(static_cast<bool>(out), ErrorCode::Io, "failed to write matrix data");
}

std::vector<NamedMatrix> read_matrices(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    fail(ErrorCode::MalformedFile, "not an NDOFMAT1 matrix file");
  const auto version = get<std::uint32_t>(in, "version");
  require(version == kMatrixFormatVersion, ErrorCode::MalformedFile,
          "unsupported matrix file version " + std::to_string(version));
  const auto count = get<std::uint32_t>(in, "count");
  require(count <= 64, ErrorCode::MalformedFile, "implausible matrix count");
  std::vector<NamedMatrix> out;
  for (std::uint32_t c = 0; c < count; ++c) {
    NamedMatrix m;
    const auto len = get<std::uint32_t>(in, "name length");
    require(len <= 256, ErrorCode::MalformedFile, "implausible matrix name length");
    m.name.resize(len);
    if (len > 0 && !in.read(m.name.data(), len))
      fail(ErrorCode::MalformedFile, "truncated matrix file while reading name");
    const auto dim = get<std::uint64_t>(in, "dimension");
    require(dim >= 1 && dim <= kMaxDim, ErrorCode::MalformedFile,
            "implausible matrix dimension " + std::to_string(dim));
    const auto flags = get<std::uint8_t>(in, "flags");
    require((flags & ~1u) == 0, ErrorCode::MalformedFile, "unknown matrix flags");
    m.hermitian = (flags & 1u) != 0;
    char pad[7];
    if (!in.read(pad, sizeof pad)) fail(ErrorCode::MalformedFile, "truncated matrix header");
    const auto bytes = static_cast<std::streamoff>(dim * dim * 16);
    if (const auto left = remaining(in); left >= 0 && left < bytes)
      fail(ErrorCode::MalformedFile, "truncated matrix file: entries of '" + m.name + "'");
    const auto n = static_cast<Eigen::Index>(dim);
    m.data.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const double re = get<double>(in, "entries");
        const double im = get<double>(in, "entries");
        m.data(i, j) = {re, im};
      }
    out.push_back(std::move(m));
  }
  if (in.peek() != std::char_traits<char>::eof())
    fail(ErrorCode::MalformedFile, "trailing bytes after last matrix");
  return out;
}

void save_pair(const std::string& path, const ResistancePair& pair) {
  pair.validate();
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write '" + path + "'");
  write_matrices(out, {{"R0", pair.R0, true}, {"Rrho", pair.Rrho, true}});
}

ResistancePair ingest_pair(std::istream& in) {
  const auto mats = read_matrices(in);
  const NamedMatrix* r0 = nullptr;
  const NamedMatrix* rr = nullptr;
  for (const auto& m : mats) {
    if (m.name == "R0") r0 = &m;
    if (m.name == "Rrho") rr = &m;
  }
  require(r0 && rr, ErrorCode::MalformedFile, "matrix file must contain 'R0' and 'Rrho'");
  require(r0->data.rows() == rr->data.rows(), ErrorCode::DimensionMismatch,
          "R0 and Rrho differ in dimension");
  ResistancePair pair{r0->data, rr->data};
  pair.validate();
  Eigen::LLT<Eigen::MatrixXcd> llt(pair.Rrho);
  require(llt.info() == Eigen::Success, ErrorCode::NotPositiveDefinite,
          "Rrho is not positive definite");
  return pair;
}

ResistancePair ingest_pair(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open '" + path + "'");
  return ingest_pair(in);
}

}  // namespace ndof
