#include "ndof/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ndof/error.hpp"

namespace ndof {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  fail(ErrorCode::MalformedFile, "line " + std::to_string(line) + ": " + what);
}

// Next non-blank line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (std::any_of(line.begin(), line.end(), [](unsigned char c) { return !std::isspace(c); }))
      return true;
  }
  return false;
}

template <class T>
bool parse_all(const std::string& line, std::vector<T>& out) {
  std::istringstream ss(line);
  out.clear();
  T v;
  while (ss >> v) out.push_back(v);
  return ss.eof();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  return std::equal(suffix.rbegin(), suffix.rend(), s.rbegin(),
                    [](char a, char b) { return std::tolower(a) == std::tolower(b); });
}

}  // namespace

TriangleMesh read_tri(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) malformed(lineno, "missing header");
  std::istringstream hs(line);
  long nv = -1, nf = -1;
  std::string flag;
  if (!(hs >> nv >> nf) || nv < 3 || nf < 1) malformed(lineno, "header must be '<nv> <nf>'");
  bool open = false;
  if (hs >> flag) {
    if (flag != "open") malformed(lineno, "unknown header flag '" + flag + "'");
    open = true;
  }
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  std::vector<double> nums;
  for (long i = 0; i < nv; ++i) {
    if (!next_line(in, line, lineno)) malformed(lineno, "unexpected end of file in vertices");
    if (!parse_all(line, nums) || nums.size() != 3) malformed(lineno, "expected three coordinates");
    verts.emplace_back(nums[0], nums[1], nums[2]);
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(nf));
  std::vector<long> idx;
  for (long i = 0; i < nf; ++i) {
    if (!next_line(in, line, lineno)) malformed(lineno, "unexpected end of file in faces");
    if (!parse_all(line, idx) || idx.size() != 3) malformed(lineno, "expected three indices");
    for (long k : idx)
      if (k < 0 || k >= nv) malformed(lineno, "vertex index out of range");
    tris.push_back({static_cast<int>(idx[0]), static_cast<int>(idx[1]), static_cast<int>(idx[2])});
  }
  if (next_line(in, line, lineno)) malformed(lineno, "trailing data after faces");
  try {
    return TriangleMesh(std::move(verts), std::move(tris), open);
  } catch (const Error& e) {
    fail(ErrorCode::MalformedFile, e.what());
  }
}

void write_tri(std::ostream& out, const TriangleMesh& mesh) {
  out.precision(17);
  out << mesh.vertices().size() << ' ' << mesh.triangles().size()
      << (mesh.open_surface() ? " open" : "") << '\n';
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

TriangleMesh read_obj(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) malformed(lineno, "vertex needs three coordinates");
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ss >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        long k = 0;
        auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), k);
        if (ec != std::errc() || p != head.data() + head.size() || k == 0)
          malformed(lineno, "bad face index '" + tok + "'");
        const long n = static_cast<long>(verts.size());
        const long i = k > 0 ? k - 1 : n + k;
        if (i < 0 || i >= n) malformed(lineno, "face index out of range");
        poly.push_back(static_cast<int>(i));
      }
      if (poly.size() < 3) malformed(lineno, "face needs at least three vertices");
      for (std::size_t j = 1; j + 1 < poly.size(); ++j) tris.push_back({poly[0], poly[j], poly[j + 1]});
    }
  }
  if (tris.empty()) malformed(lineno, "no faces");
  try {
    return TriangleMesh(std::move(verts), std::move(tris));
  } catch (const Error& e) {
    fail(ErrorCode::MalformedFile, e.what());
  }
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  out.precision(17);
  for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles())
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

TriangleMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot open mesh file '" + path + "'");
  return ends_with(path, ".obj") ? read_obj(in) : read_tri(in);
}

void save_mesh(const std::string& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write mesh file '" + path + "'");
  if (ends_with(path, ".obj"))
    write_obj(out, mesh);
  else
    write_tri(out, mesh);
  require(static_cast<bool>(out), ErrorCode::Io, "write failed for '" + path + "'");
}

}  // namespace ndof
