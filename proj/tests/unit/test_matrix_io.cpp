#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "ndof/error.hpp"
#include "ndof/matrix_io.hpp"

using namespace ndof;

namespace {

ResistancePair random_pair(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(n, n), B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A(i, j) = {g(rng), g(rng)};
      B(i, j) = {g(rng), g(rng)};
    }
  Eigen::MatrixXcd R0 = A * A.adjoint(), Rr = B * B.adjoint() + Eigen::MatrixXcd::Identity(n, n);
  R0 = 0.5 * (R0 + R0.adjoint()).eval();
  Rr = 0.5 * (Rr + Rr.adjoint()).eval();
  return {R0, Rr};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

std::string serialized(const std::vector<NamedMatrix>& m) {
  std::ostringstream out(std::ios::binary);
  write_matrices(out, m);
  return out.str();
}

}  // namespace

TEST_CASE("round trip is bit identical") {
  const auto p = random_pair(7, 1);
  const std::string bytes = serialized({{"R0", p.R0, true}, {"Rrho", p.Rrho, true}});
  // Header: magic, version, count, name_len, "R0", dim, flags, pad.
  CHECK(bytes.substr(0, 8) == "NDOFMAT1");
  CHECK(bytes.size() == 8 + 4 + 4 + 2 * (4 + 8 + 1 + 7 + 7 * 7 * 16) + 2 + 4);
  std::istringstream in(bytes);
  const auto back = ingest_pair(in);
  CHECK(std::memcmp(back.R0.data(), p.R0.data(), sizeof(cdouble) * 49) == 0);
  CHECK(std::memcmp(back.Rrho.data(), p.Rrho.data(), sizeof(cdouble) * 49) == 0);
  CHECK(serialized({{"R0", back.R0, true}, {"Rrho", back.Rrho, true}}) == bytes);

  // Spectrum from the ingested file is identical to the in-memory one.
  const auto a = radiation_modes(p).spectrum.eigenvalues;
  const auto b = radiation_modes(back).spectrum.eigenvalues;
  CHECK(a == b);
}

TEST_CASE("file round trip") {
  const auto path = (std::filesystem::temp_directory_path() / "ndof_matrix_io_test.ndm").string();
  const auto p = random_pair(5, 2);
  save_pair(path, p);
  const auto back = ingest_pair(path);
  CHECK(back.R0 == p.R0);
  CHECK(back.Rrho == p.Rrho);
  std::filesystem::remove(path);
  CHECK(code_of([&] { ingest_pair(path); }) == ErrorCode::Io);
}

TEST_CASE("malformed containers") {
  const auto p = random_pair(4, 3);
  const std::string good = serialized({{"R0", p.R0, true}, {"Rrho", p.Rrho, true}});
  const auto ingest = [](const std::string& s) {
    std::istringstream in(s);
    return ingest_pair(in);
  };
  CHECK(code_of([&] { ingest(good.substr(0, good.size() - 3)); }) == ErrorCode::MalformedFile);
  CHECK(code_of([&] { ingest(good.substr(0, 30)); }) == ErrorCode::MalformedFile);
  CHECK(code_of([&] { ingest(good + "x"); }) == ErrorCode::MalformedFile);
  CHECK(code_of([&] { ingest("NOTAMATRIX"); }) == ErrorCode::MalformedFile);
  std::string bad_version = good;
  bad_version[8] = 2;
  CHECK(code_of([&] { ingest(bad_version); }) == ErrorCode::MalformedFile);
  std::string bad_flags = good;
  bad_flags[8 + 4 + 4 + 4 + 2 + 8] = 4;
  CHECK(code_of([&] { ingest(bad_flags); }) == ErrorCode::MalformedFile);

  CHECK(code_of([&] { ingest(serialized({{"R0", p.R0, true}})); }) == ErrorCode::MalformedFile);
  CHECK(code_of([&] {
          ingest(serialized({{"R0", p.R0, true}, {"Rrho", Eigen::MatrixXcd::Identity(3, 3), true}}));
        }) == ErrorCode::DimensionMismatch);
  Eigen::MatrixXcd skew = p.R0;
  skew(0, 1) += cdouble(0.5, 0.0);
  CHECK(code_of([&] { ingest(serialized({{"R0", skew, false}, {"Rrho", p.Rrho, true}})); }) ==
        ErrorCode::InvalidArgument);
  Eigen::MatrixXcd indefinite = p.Rrho;
  indefinite(2, 2) = -100.0;
  CHECK(code_of([&] { ingest(serialized({{"R0", p.R0, true}, {"Rrho", indefinite, true}})); }) ==
        ErrorCode::NotPositiveDefinite);
}

TEST_CASE("extra matrices are ignored") {
  const auto p = random_pair(3, 4);
  const std::string bytes = serialized(
      {{"notes", Eigen::MatrixXcd::Zero(1, 1), false}, {"Rrho", p.Rrho, true}, {"R0", p.R0, true}});
  std::istringstream in(bytes);
  const auto back = ingest_pair(in);
  CHECK(back.R0 == p.R0);
  std::istringstream in2(bytes);
  CHECK(read_matrices(in2).size() == 3);
}
