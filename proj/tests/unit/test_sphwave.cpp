#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"
#include "ndof/sphwave.hpp"
#include "../support/oracles.hpp"

using namespace ndof;

TEST_CASE("mode_count") {
  CHECK(mode_count(1) == 6);
  CHECK(mode_count(10) == 240);
  for (int L = 2; L <= 40; ++L) CHECK(mode_count(L) - mode_count(L - 1) == 2 * (2 * L + 1));
  CHECK_THROWS_AS(mode_count(0), Error);
  // L = ka = 10 against the 2(ka)^2 estimate
  CHECK(std::abs(double(mode_count(10)) / 200.0 - 1.0) <= 0.2);
}

TEST_CASE("ModeIndex linear index round trip") {
  std::size_t n = 0;
  for (int l = 1; l <= 12; ++l)
    for (int m = -l; m <= l; ++m)
      for (int tau = 1; tau <= 2; ++tau) {
        const ModeIndex mi{tau, l, m};
        CHECK(mi.linear() == n);
        CHECK(ModeIndex::from_linear(n) == mi);
        ++n;
      }
  CHECK(n == mode_count(12));
  CHECK_THROWS(ModeIndex{3, 1, 0}.linear());
  CHECK_THROWS(ModeIndex{1, 2, 3}.linear());
}

TEST_CASE("radial_function examples") {
  CHECK(std::abs(radial_function(1, 0, kPi)) < 1e-15);
  CHECK(radial_function(1, 0, 1.0) == doctest::Approx(0.841471).epsilon(1e-6));
  const double x = 1e-3;
  CHECK(std::abs(radial_function(1, 1, x) / (x / 3) - 1.0) < 1e-6);
  CHECK_THROWS_AS(radial_function(1, 1, 0.0), Error);
  CHECK_THROWS_AS(radial_function(1, 1, -1.0), Error);
  CHECK_THROWS_AS(radial_function(3, 1, 1.0), Error);
}

TEST_CASE("spherical Bessel values against independent references") {
  for (double x : {0.001, 0.1, 0.5, 1.0, 2.0}) {
    const auto j = spherical_bessel_j(30, x);
    for (int l = 0; l <= 30; ++l) {
      const double ref = oracle::sph_bessel_series(l, x);
      CHECK(std::abs(j[l] - ref) <= 1e-12 * std::abs(ref) + 1e-300);
    }
  }
  for (double x : {3.0, 7.5, 10.0, 31.4, 50.0, 100.0}) {
    const int lmax = static_cast<int>(2 * x + 40);
    const auto j = spherical_bessel_j(lmax, x);
    for (int l = 0; l <= std::min(lmax, 120); ++l) {
      const double ref = std::sph_bessel(l, x);
      INFO("x=" << x << " l=" << l);
      CHECK(std::abs(j[l] - ref) <= 1e-9 * std::abs(ref) + 1e-13 / x);
    }
  }
}

TEST_CASE("three-term recurrence holds") {
  for (double x = 0.1; x <= 100.0; x *= 1.37) {
    const auto j = spherical_bessel_j(61, x);
    for (int l = 1; l <= 60; ++l) {
      const double lhs = j[l - 1] + j[l + 1];
      const double rhs = (2 * l + 1) * j[l] / x;
      const double scale = std::max({std::abs(lhs), std::abs(j[l - 1]), std::abs(j[l + 1])});
      INFO("x=" << x << " l=" << l);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("R2 equals the derivative of x j_l over x") {
  for (double x : {0.7, 3.3, 12.0}) {
    for (int l = 0; l <= 8; ++l) {
      const double h = 1e-5;
      const double d = ((x + h) * std::sph_bessel(l, x + h) - (x - h) * std::sph_bessel(l, x - h)) /
                       (2 * h) / x;
      CHECK(radial_function(2, l, x) == doctest::Approx(d).epsilon(1e-7));
    }
  }
}

TEST_CASE("vector harmonics are orthonormal on the sphere") {
  // Gauss-Legendre in cos(theta) times trapezoid in phi.
  const int lmax = 4, nt = 24, np = 24;
  std::vector<double> xs(nt), ws(nt);
  {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nt, nt);
    for (int i = 1; i < nt; ++i) J(i, i - 1) = J(i - 1, i) = i / std::sqrt(4.0 * i * i - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    for (int i = 0; i < nt; ++i) {
      xs[i] = es.eigenvalues()[i];
      ws[i] = 2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
  }
  const std::size_t ns = VectorHarmonics::slot(lmax, lmax) + 1;
  Eigen::MatrixXcd g1 = Eigen::MatrixXcd::Zero(ns, ns), g12 = g1, gy = g1;
  for (int it = 0; it < nt; ++it)
    for (int ip = 0; ip < np; ++ip) {
      const double ct = xs[it], st = std::sqrt(1 - ct * ct), ph = 2 * kPi * ip / np;
      const auto h = vector_harmonics(Vec3(st * std::cos(ph), st * std::sin(ph), ct), lmax);
      const double w = ws[it] * 2 * kPi / np;
      for (std::size_t a = 0; a < ns; ++a)
        for (std::size_t b = 0; b < ns; ++b) {
          g1(a, b) += w * h.a1[a].dot(h.a1[b]);
          g12(a, b) += w * h.a1[a].dot(h.a2[b]);
          gy(a, b) += w * std::conj(h.y[a]) * h.y[b];
        }
    }
  CHECK((g1 - Eigen::MatrixXcd::Identity(ns, ns)).norm() < 1e-12);
  CHECK(g12.norm() < 1e-12);
  CHECK((gy - Eigen::MatrixXcd::Identity(ns, ns)).norm() < 1e-12);
}

TEST_CASE("u2 is the curl of u1 over k") {
  const double k = 2.3;
  const int lmax = 5;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    const Vec3 r(U(rng), U(rng), U(rng));
    const auto u = regular_waves(r, k, lmax);
    for (std::size_t n = 0; n < mode_count(lmax); n += 2) {
      auto f = [&](const Vec3& p) { return regular_waves(p, k, lmax)[n]; };
      const CVec3 c = oracle::curl(f, r, 1e-5) / k;
      INFO("mode " << n);
      CHECK((c - u[n + 1]).norm() < 1e-7);
    }
  }
}

TEST_CASE("plane wave expansion reconstructs the plane wave") {
  const double k = 1.0;
  const Vec3 kh = Vec3(0.3, -0.5, 0.8).normalized();
  const Vec3 e = kh.cross(Vec3(1, 0, 0)).normalized();
  const int lmax = 30;
  const auto a = plane_wave_coefficients(kh, e, lmax);
  for (const Vec3& r : {Vec3(0.5, 0.2, -0.1), Vec3(-2.0, 1.0, 1.5), Vec3(0, 0, 3.0)}) {
    const auto u = regular_waves(r, k, lmax);
    CVec3 sum = CVec3::Zero();
    for (std::size_t n = 0; n < u.size(); ++n) sum += a[n] * u[n];
    const CVec3 exact = e.cast<cdouble>() * std::polar(1.0, k * kh.dot(r));
    CHECK((sum - exact).norm() < 1e-10);
  }
}

TEST_CASE("plane wave along z couples only to |m| = 1") {
  const auto a = plane_wave_coefficients(Vec3::UnitZ(), Vec3::UnitX(), 8);
  for (std::size_t n = 0; n < a.size(); ++n) {
    const auto mi = ModeIndex::from_linear(n);
    if (std::abs(mi.m) != 1) CHECK(std::abs(a[n]) < 1e-12);
  }
  CHECK_THROWS_AS(plane_wave_coefficients(Vec3::UnitZ(), Vec3(0.6, 0, 0.8), 3), Error);
}

TEST_CASE("sum of |a_n|^2 is rotation invariant") {
  const int lmax = 10;
  auto total = [&](const Vec3& k, const Vec3& e) {
    double s = 0;
    for (auto c : plane_wave_coefficients(k, e, lmax)) s += std::norm(c);
    return s;
  };
  const double ref = total(Vec3::UnitZ(), Vec3::UnitX());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  for (int i = 0; i < 10; ++i) {
    const Vec3 k = Vec3(N(rng), N(rng), N(rng)).normalized();
    const Vec3 e = k.cross(Vec3(N(rng), N(rng), N(rng))).normalized();
    CHECK(total(k, e) == doctest::Approx(ref).epsilon(1e-10));
  }
  // Per degree: 16 pi^2 (2l+1)/(4 pi) summed over l <= lmax.
  CHECK(ref == doctest::Approx(4 * kPi * ((lmax + 1) * (lmax + 1) - 1)).epsilon(1e-10));
}

TEST_CASE("polarization-direction average of |a_n|^2 is 2 pi") {
  const int lmax = 5;
  const int samples = 10000;
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> N;
  std::vector<double> acc(mode_count(lmax), 0.0);
  for (int s = 0; s < samples; ++s) {
    const Vec3 k = Vec3(N(rng), N(rng), N(rng)).normalized();
    const Vec3 e = k.cross(Vec3(N(rng), N(rng), N(rng))).normalized();
    const auto a = plane_wave_coefficients(k, e, lmax);
    for (std::size_t n = 0; n < a.size(); ++n) acc[n] += std::norm(a[n]);
  }
  for (double v : acc) CHECK(std::abs(v / samples / (2 * kPi) - 1.0) < 0.05);
}

TEST_CASE("regular wave matrix") {
  const std::vector<Vec3> origin{Vec3::Zero()};
  const std::vector<Vec3> t1{Vec3::UnitX()}, t2{Vec3::UnitY()};
  const auto U = regular_wave_matrix(origin, t1, t2, {}, 1.0, 4);
  for (Eigen::Index n = 0; n < U.rows(); ++n) {
    const auto mi = ModeIndex::from_linear(static_cast<std::size_t>(n));
    if (mi.l >= 2) CHECK(U.row(n).norm() == 0.0);
  }
  CHECK(U.topRows(6).norm() > 0.0);

  const std::vector<Vec3> pts{Vec3(0.3, -0.2, 0.5)};
  const std::vector<Vec3> ta{Vec3(1, 0, 0)}, tb{Vec3(0, 1, 0)};
  const auto V = regular_wave_matrix(pts, ta, tb, {}, 2.0, 3);
  for (int l = 1; l <= 3; ++l)
    for (int m = 1; m <= l; ++m)
      for (int tau = 1; tau <= 2; ++tau) {
        const auto p = static_cast<Eigen::Index>(ModeIndex{tau, l, m}.linear());
        const auto q = static_cast<Eigen::Index>(ModeIndex{tau, l, -m}.linear());
        const double sign = m % 2 ? -1.0 : 1.0;
        CHECK((V.row(q) - sign * V.row(p).conjugate()).norm() < 1e-14);
      }
  CHECK_THROWS_AS(regular_wave_matrix({}, {}, {}, {}, 1.0, 2), Error);
}

TEST_CASE("shell spectrum") {
  // rho for (tau=1, l=1) at ka = 1, R_s = eta0 is j_1(1)^2.
  const auto s = shell_spectrum(1.0, LossModel::surface(1.0), 4);
  CHECK(s.size() == mode_count(4));
  const double j1 = oracle::sph_bessel_series(1, 1.0);
  bool found = false;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.labels[i] == ModeIndex{1, 1, 0}) {
      CHECK(s.eigenvalues[i] == doctest::Approx(j1 * j1).epsilon(1e-12));
      found = true;
    }
  CHECK(found);
  CHECK(j1 * j1 == doctest::Approx(0.0907026).epsilon(1e-5));
  s.validate();

  const auto s2 = shell_spectrum(1.0, LossModel::surface(2.0), 4);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(s2.eigenvalues[i] == doctest::Approx(s.eigenvalues[i] / 2).epsilon(1e-14));
  CHECK_THROWS_AS(shell_spectrum(1.0, LossModel::volume(1.0), 4), Error);
}

TEST_CASE("ball spectrum") {
  const auto s = ball_spectrum(1.0, LossModel::volume(1.0), 4);
  const double j0 = std::sin(1.0), j1 = oracle::sph_bessel_series(1, 1.0),
               j2 = oracle::sph_bessel_series(2, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.labels[i] == ModeIndex{1, 1, 1})
      CHECK(s.eigenvalues[i] == doctest::Approx(0.5 * (j1 * j1 - j0 * j2)).epsilon(1e-12));
  const auto s2 = ball_spectrum(1.0, LossModel::volume(2.0), 4);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(s2.eigenvalues[i] == doctest::Approx(s.eigenvalues[i] / 2).epsilon(1e-14));
  CHECK_THROWS_AS(ball_spectrum(1.0, LossModel::surface(1.0), 4), Error);
}

TEST_CASE("sphere spectra are degenerate in m") {
  for (const auto& s : {shell_spectrum(7.3, LossModel::surface(1e-3), 12),
                        ball_spectrum(7.3, LossModel::volume(1e-3), 12)}) {
    std::map<std::pair<int, int>, std::vector<double>> groups;
    for (std::size_t i = 0; i < s.size(); ++i)
      groups[{s.labels[i].tau, s.labels[i].l}].push_back(s.eigenvalues[i]);
    for (const auto& [key, vals] : groups) {
      CHECK(vals.size() == static_cast<std::size_t>(2 * key.second + 1));
      for (double v : vals) CHECK(v == vals.front());
    }
  }
}
