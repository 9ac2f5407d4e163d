#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "ndof/ndof.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("status names and errors") {
  CHECK(std::string(ndof_status_name(NDOF_OK)) == "ok");
  CHECK(std::string(ndof_status_name(NDOF_ERR_IO)) == "io-error");
  ndof_spectrum* s = nullptr;
  CHECK(ndof_sphere_spectrum(0, -1.0, NDOF_LOSS_SURFACE, 1e-5, 0, &s) == NDOF_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(std::string(ndof_last_error()).size() > 0);
  CHECK(ndof_sphere_spectrum(0, 1.0, NDOF_LOSS_SURFACE, 1e-5, 0, nullptr) ==
        NDOF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(ndof_last_error()).find("NULL") != std::string::npos);
  CHECK(std::string(ndof_version()) == "1.0.0");
}

TEST_CASE("sphere spectrum and report") {
  ndof_spectrum* s = nullptr;
  REQUIRE(ndof_sphere_spectrum(0, 10.0, NDOF_LOSS_SURFACE, 1e-5, 0, &s) == NDOF_OK);
  const size_t n = ndof_spectrum_size(s);
  CHECK(n == size_t(2 * ndof_default_lmax(10.0) * (ndof_default_lmax(10.0) + 2)));
  std::vector<double> rho(n);
  CHECK(ndof_spectrum_values(s, rho.data(), n) == NDOF_OK);
  for (size_t i = 1; i < n; ++i) CHECK(rho[i] <= rho[i - 1]);
  int tau = 0, l = 0, m = 0;
  CHECK(ndof_spectrum_label(s, 0, &tau, &l, &m) == NDOF_OK);
  CHECK(l >= 1);
  CHECK(ndof_spectrum_label(s, n, &tau, &l, &m) == NDOF_ERR_INVALID_ARGUMENT);
  ndof_report r;
  CHECK(ndof_spectrum_report(s, 1.0, &r) == NDOF_OK);
  CHECK(r.total_modes == n);
  CHECK(r.threshold_count > 200);
  CHECK(r.effective > 1.0);
  ndof_spectrum_free(s);

  const double vals[] = {0.0, 0.0};
  REQUIRE(ndof_spectrum_from_values(vals, 2, 1.0, 1.0, &s) == NDOF_OK);
  CHECK(ndof_spectrum_report(s, 1.0, &r) == NDOF_OK);
  CHECK(std::isnan(r.effective));
  ndof_spectrum_free(s);
  const double neg[] = {-1.0};
  CHECK(ndof_spectrum_from_values(neg, 1, 1.0, 1.0, &s) == NDOF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("mesh handles") {
  CHECK(ndof_builtin_shape_count() >= 10);
  CHECK(ndof_builtin_shape_name(1000) == nullptr);
  ndof_mesh* m = nullptr;
  CHECK(ndof_mesh_builtin("nonsense", nullptr, &m) == NDOF_ERR_INVALID_ARGUMENT);
  ndof_shape_options o;
  ndof_shape_options_default(&o);
  o.max_edge = 0.1;
  REQUIRE(ndof_mesh_builtin("sphere", &o, &m) == NDOF_OK);
  ndof_mesh_info info;
  CHECK(ndof_mesh_get_info(m, &info) == NDOF_OK);
  CHECK(info.circumradius == doctest::Approx(1.0));
  CHECK(info.surface_area == doctest::Approx(4 * M_PI).epsilon(0.02));
  double avg = 0.0;
  std::vector<double> per(50);
  CHECK(ndof_average_shadow_area(m, 50, 128, &avg, per.data()) == NDOF_OK);
  CHECK(avg == doctest::Approx(M_PI).epsilon(0.03));
  const double d[3] = {0, 0, 1};
  double a = 0.0;
  CHECK(ndof_shadow_area(m, d, 0, &a) == NDOF_ERR_INVALID_ARGUMENT);

  const auto path = temp_path("ndof_capi_mesh.obj");
  CHECK(ndof_mesh_save(m, path.c_str()) == NDOF_OK);
  ndof_mesh* back = nullptr;
  CHECK(ndof_mesh_load(path.c_str(), &back) == NDOF_OK);
  ndof_mesh_info info2;
  ndof_mesh_get_info(back, &info2);
  CHECK(info2.triangles == info.triangles);
  ndof_mesh_free(back);
  std::filesystem::remove(path);
  CHECK(ndof_mesh_load(path.c_str(), &back) == NDOF_ERR_IO);
  ndof_mesh_free(m);
}

TEST_CASE("problem from a mesh and from a matrix file give the same spectrum") {
  ndof_shape_options o;
  ndof_shape_options_default(&o);
  o.max_edge = 0.15;
  ndof_mesh* m = nullptr;
  REQUIRE(ndof_mesh_builtin("sphere", &o, &m) == NDOF_OK);
  ndof_discretize_options d;
  ndof_discretize_options_default(&d);
  d.wavelength = 2 * M_PI / 1.5;  // ka = 1.5
  d.loss_value = 1e-3;
  ndof_problem* p = nullptr;
  REQUIRE(ndof_problem_from_mesh(m, &d, &p) == NDOF_OK);
  ndof_problem_info info;
  CHECK(ndof_problem_get_info(p, &info) == NDOF_OK);
  CHECK(info.ka == doctest::Approx(1.5));
  CHECK(info.unknowns == 2 * info.points);

  ndof_spectrum *dense = nullptr, *fact = nullptr;
  CHECK(ndof_problem_modes(p, NDOF_SOLVER_DENSE, &dense) == NDOF_OK);
  CHECK(ndof_problem_modes(p, NDOF_SOLVER_AUTO, &fact) == NDOF_OK);
  double a = 0, b = 0;
  ndof_spectrum_values(dense, &a, 1);
  ndof_spectrum_values(fact, &b, 1);
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  double trace = 0.0;
  CHECK(ndof_problem_trace(p, &trace) == NDOF_OK);

  const auto path = temp_path("ndof_capi_pair.ndm");
  CHECK(ndof_problem_save(p, path.c_str()) == NDOF_OK);
  ndof_problem* q = nullptr;
  REQUIRE(ndof_problem_load(path.c_str(), info.ka, info.wavelength, &q) == NDOF_OK);
  ndof_spectrum* ingested = nullptr;
  CHECK(ndof_problem_modes(q, NDOF_SOLVER_AUTO, &ingested) == NDOF_OK);
  const size_t n = ndof_spectrum_size(dense);
  REQUIRE(ndof_spectrum_size(ingested) == n);
  std::vector<double> x(n), y(n);
  ndof_spectrum_values(dense, x.data(), n);
  ndof_spectrum_values(ingested, y.data(), n);
  CHECK(x == y);
  double trace2 = 0.0;
  ndof_problem_trace(q, &trace2);
  CHECK(trace2 == doctest::Approx(trace).epsilon(1e-10));
  CHECK(ndof_problem_modes(q, NDOF_SOLVER_FACTORED, &ingested) == NDOF_ERR_INVALID_ARGUMENT);
  CHECK(ndof_problem_write_points(q, path.c_str()) == NDOF_ERR_INVALID_ARGUMENT);

  // Volume currents need a volume loss model.
  d.layers = 2;
  ndof_problem* bad = nullptr;
  CHECK(ndof_problem_from_mesh(m, &d, &bad) == NDOF_ERR_KIND_MISMATCH);
  d.layers = 0;
  d.loss_kind = NDOF_LOSS_VOLUME;
  CHECK(ndof_problem_from_mesh(m, &d, &bad) == NDOF_ERR_KIND_MISMATCH);

  std::filesystem::remove(path);
  ndof_spectrum_free(dense);
  ndof_spectrum_free(fact);
  ndof_spectrum_free(ingested);
  ndof_problem_free(p);
  ndof_problem_free(q);
  ndof_mesh_free(m);
}

TEST_CASE("waterfill and inverse source through the C API") {
  const double nu[] = {1.0, 0.75, 0.5, 0.1, 0.01};
  double p[5];
  ndof_allocation a;
  CHECK(ndof_waterfill(nu, 5, 10.0, p, &a) == NDOF_OK);
  CHECK(p[4] == 0.0);
  CHECK(a.active_count == 3);  // floors 0.1, 0.133, 0.2 under a level of 0.478
  const double zero[] = {0.0, 0.0};
  CHECK(ndof_waterfill(zero, 2, 10.0, p, &a) == NDOF_ERR_NO_CHANNEL);

  const double rho[] = {4.0, 1.0, 0.0};
  ndof_spectrum* s = nullptr;
  REQUIRE(ndof_spectrum_from_values(rho, 3, 1.0, 1.0, &s) == NDOF_OK);
  const double cur[] = {1.0, 0.0, 0.0, 2.0, 5.0, 5.0};
  double data[6], out[6];
  CHECK(ndof_forward(s, cur, 0.0, 1, data) == NDOF_OK);
  CHECK(data[0] == -2.0);
  CHECK(data[3] == -2.0);
  ndof_inverse_info info;
  CHECK(ndof_reconstruct(s, data, NDOF_TIKHONOV, 0.0, out, &info) == NDOF_ERR_RANK_DEFICIENCY);
  CHECK(ndof_reconstruct(s, data, NDOF_TRUNCATED_SVD, 1.0, out, &info) == NDOF_OK);
  CHECK(info.retained == 2);
  CHECK(out[0] == doctest::Approx(1.0));
  CHECK(out[3] == doctest::Approx(2.0));
  ndof_spectrum_free(s);

  ndof_resolution r;
  CHECK(ndof_resolution_estimate(4 * M_PI, 0.75 * M_PI, 1.0, &r) == NDOF_OK);
  CHECK(r.radiating_fraction == doctest::Approx(0.75));
}
