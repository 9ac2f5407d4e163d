#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "ndof/constants.hpp"
#include "ndof/discretize.hpp"
#include "ndof/error.hpp"
#include "ndof/shapes.hpp"

using namespace ndof;

TEST_CASE("flat square at the minimum density") {
  const auto plate = square_plate(1.0, 1);
  const double k = 2 * kPi;  // lambda = 1
  const auto d = sample_mesh(plate, k, 8.0);
  CHECK(d.size() >= 8);
  CHECK(d.total_weight() == doctest::Approx(1.0).epsilon(0.01));
  CHECK_FALSE(d.low_density);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(d.tangent1[i].norm() - 1.0) < 1e-12);
    CHECK(std::abs(d.tangent1[i].dot(d.tangent2[i])) < 1e-12);
    CHECK(std::abs(d.tangent1[i].z()) < 1e-12);
    CHECK(std::abs(d.tangent2[i].z()) < 1e-12);
  }
  CHECK(sample_mesh(plate, k, 4.0).low_density);
  CHECK_THROWS_AS(sample_mesh(plate, -1.0), Error);
  CHECK_THROWS_AS(sample_mesh(TriangleMesh(), k), Error);
}

TEST_CASE("sphere sampling weights and density scaling") {
  const auto s = icosphere(1.0, 5);
  const double k = 3.0;
  const auto d16 = sample_mesh(s, k, 16.0);
  const auto d32 = sample_mesh(s, k, 32.0);
  CHECK(d16.total_weight() == doctest::Approx(4 * kPi).epsilon(0.01));
  CHECK(d32.total_weight() == doctest::Approx(4 * kPi).epsilon(0.01));
  const double ratio = double(d32.size()) / double(d16.size());
  CHECK(ratio > 1.8);
  CHECK(ratio < 2.2);
  CHECK(d16.achieved_density == doctest::Approx(16.0).epsilon(0.1));
  CHECK(d16.origin.norm() < 1e-9);
  // Points stay on the surface and tangents are tangent.
  for (std::size_t i = 0; i < d16.size(); ++i) {
    const Vec3 n = d16.points[i].normalized();
    CHECK(std::abs(d16.points[i].norm() - 1.0) < 0.01);
    CHECK(std::abs(d16.tangent1[i].dot(n)) < 0.05);
  }
}

TEST_CASE("loss matrix") {
  const auto d = sample_mesh(icosphere(1.0, 3), 2.0, 16.0, LossModel::surface(1e-3));
  const auto R = loss_matrix(d);
  CHECK(R.rows() == d.unknowns());
  CHECK((R - Eigen::MatrixXcd(R.diagonal().asDiagonal())).norm() == 0.0);
  const double rs = 1e-3 * kEta0;
  CHECK(R.trace().real() == doctest::Approx(2 * rs * d.total_weight()).epsilon(1e-12));
  CHECK((R - R.adjoint()).norm() == 0.0);
  CHECK(gram_diagonal(d).sum() == doctest::Approx(2 * d.total_weight()));
}

TEST_CASE("a dipole at the origin only couples to the TM dipole modes") {
  Discretization d;
  d.k = 1.0;
  d.points = {Vec3::Zero()};
  d.weights = {1.0};
  d.tangent1 = {Vec3::UnitX()};
  d.tangent2 = {Vec3::UnitY()};
  d.directions_per_point = 3;
  const auto U = wave_matrix(d, 4);
  for (Eigen::Index n = 0; n < U.rows(); ++n) {
    const auto idx = ModeIndex::from_linear(std::size_t(n));
    const double norm = U.row(n).norm();
    if (idx.tau == 2 && idx.l == 1)
      CHECK(norm > 0.0);
    else
      CHECK(norm < 1e-12);
  }
  const Eigen::MatrixXcd R0 = U.adjoint() * U;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(R0);
  const double top = es.eigenvalues().maxCoeff();
  int rank = 0;
  for (int i = 0; i < 3; ++i) rank += es.eigenvalues()[i] > 1e-10 * top;
  CHECK(rank == 3);
  // Isotropic: all three orientations radiate equally.
  CHECK(es.eigenvalues().minCoeff() == doctest::Approx(top).epsilon(1e-10));
}

TEST_CASE("trace identity and factored modes on a discretized sphere") {
  const double ka = 2.0;
  const auto d = sample_mesh(icosphere(1.0, 4), ka, 16.0, LossModel::surface(1e-2));
  const int lmax = default_lmax(ka);
  const auto pair = assemble_pair(d, lmax);
  CHECK((pair.R0 - pair.R0.adjoint()).norm() == 0.0);
  const auto dense = radiation_modes(pair);
  const auto fact = discretized_modes(d, lmax, 1.0);
  const double sum = std::accumulate(dense.spectrum.eigenvalues.begin(),
                                     dense.spectrum.eigenvalues.end(), 0.0);
  CHECK(trace_identity(pair) == doctest::Approx(sum).epsilon(1e-8));
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(fact.spectrum.eigenvalues[i] ==
          doctest::Approx(dense.spectrum.eigenvalues[i]).epsilon(1e-8));
  CHECK(fact.spectrum.ka == doctest::Approx(ka));

  // Dominant modes approach the analytic shell.
  const auto shell = shell_spectrum(ka, LossModel::surface(1e-2), lmax);
  CHECK(fact.spectrum.eigenvalues[0] == doctest::Approx(shell.eigenvalues[0]).epsilon(0.05));
}

TEST_CASE("sampled current norm approximates the surface integral") {
  const auto d = sample_mesh(icosphere(1.0, 5), 4.0, 16.0);
  std::vector<Eigen::Vector3cd> field;
  for (const auto& p : d.points) {
    const Vec3 n = p.normalized();
    const Vec3 j = Vec3::UnitZ() - n.z() * n;  // tangential part of z^
    field.push_back(j.cast<cdouble>() * std::exp(cdouble(0, p.x())));
  }
  const auto I = sample_current(d, field);
  const double norm = (I.adjoint() * gram_diagonal(d).cast<cdouble>().asDiagonal() * I)(0).real();
  CHECK(norm == doctest::Approx(8 * kPi / 3).epsilon(0.05));
  field.pop_back();
  CHECK_THROWS_AS(sample_current(d, field), Error);
}

TEST_CASE("volume sampling") {
  const auto s = icosphere(1.0, 4);
  const auto v = sample_volume(s, 2.0, 4, 16.0);
  CHECK(v.directions_per_point == 3);
  CHECK(v.approximate_volume);
  CHECK(v.unknowns() == Eigen::Index(3 * v.size()));
  CHECK(v.total_weight() == doctest::Approx(4 * kPi / 3).epsilon(0.01));
  CHECK_THROWS_AS(sample_volume(s, 2.0, 4, 16.0, LossModel::surface(1e-3)), Error);
  try {
    sample_volume(s, 2.0, 4, 16.0, LossModel::surface(1e-3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KindMismatch);
  }
  // rho_r = v eta0 / k on the diagonal.
  const auto diag = loss_diagonal(v);
  CHECK(diag[0] == doctest::Approx(1e-5 * kEta0 / 2.0 * v.weights[0]));
}

TEST_CASE("edge length for a density and CSV output") {
  const double e = edge_for_density(1.0, 16.0);
  CHECK(std::sqrt(3.0) / 4 * e * e == doctest::Approx(1.0 / 16));
  const auto d = sample_mesh(square_plate(1.0, 1), 2 * kPi, 8.0);
  std::ostringstream out;
  write_discretization_csv(out, d);
  const std::string text = out.str();
  CHECK(text.rfind("x,y,z,weight,t1x,t1y,t1z,t2x,t2y,t2z\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == long(d.size() + 1));
}
