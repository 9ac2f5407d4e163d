#include "ndof/ndof.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "ndof/capacity.hpp"
#include "ndof/constants.hpp"
#include "ndof/discretize.hpp"
#include "ndof/error.hpp"
#include "ndof/geometry.hpp"
#include "ndof/invsource.hpp"
#include "ndof/matrix_io.hpp"
#include "ndof/mesh_io.hpp"
#include "ndof/modes.hpp"
#include "ndof/shapes.hpp"

struct ndof_spectrum {
  ndof::RadiationSpectrum s;
};

struct ndof_mesh {
  ndof::TriangleMesh m;
};

struct ndof_problem {
  std::optional<ndof::Discretization> disc;
  mutable std::optional<ndof::ResistancePair> pair;  // assembled on demand
  int lmax = 0;
  double ka = 0.0;
  double wavelength = 1.0;

  const ndof::ResistancePair& resistance() const {
    if (!pair) pair = ndof::assemble_pair(*disc, lmax);
    return *pair;
  }
};

namespace {

thread_local std::string last_error;

ndof_status fail_with(ndof_status code, std::string msg) {
  last_error = std::move(msg);
  return code;
}

// Runs f, translating exceptions into status codes.
template <class F>
ndof_status guarded(F&& f) noexcept {
  try {
    f();
    return NDOF_OK;
  } catch (const ndof::Error& e) {
    return fail_with(static_cast<ndof_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail_with(NDOF_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail_with(NDOF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail_with(NDOF_ERR_INTERNAL, "unknown error");
  }
}

void need(const void* p, const char* what) {
  if (!p) ndof::fail(ndof::ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

ndof::LossModel loss_model(ndof_loss_kind kind, double value) {
  switch (kind) {
    case NDOF_LOSS_SURFACE: return ndof::LossModel::surface(value);
    case NDOF_LOSS_VOLUME: return ndof::LossModel::volume(value);
  }
  ndof::fail(ndof::ErrorCode::InvalidArgument, "unknown loss kind");
}

std::vector<ndof::cdouble> complex_in(const double* v, std::size_t n) {
  std::vector<ndof::cdouble> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {v[2 * i], v[2 * i + 1]};
  return out;
}

void complex_out(const std::vector<ndof::cdouble>& v, double* out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[2 * i] = v[i].real();
    out[2 * i + 1] = v[i].imag();
  }
}

}  // namespace

extern "C" {

const char* ndof_version(void) { return "1.0.0"; }

const char* ndof_last_error(void) { return last_error.c_str(); }

const char* ndof_status_name(ndof_status status) {
  switch (status) {
    case NDOF_OK: return "ok";
    case NDOF_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case NDOF_ERR_KIND_MISMATCH: return "kind-mismatch";
    case NDOF_ERR_DECOMPOSITION: return "decomposition-failure";
    case NDOF_ERR_UNDEFINED_RATIO: return "undefined-ratio";
    case NDOF_ERR_NO_CHANNEL: return "no-channel";
    case NDOF_ERR_RANK_DEFICIENCY: return "rank-deficiency";
    case NDOF_ERR_IO: return "io-error";
    case NDOF_ERR_MALFORMED_FILE: return "malformed-file";
    case NDOF_ERR_DIMENSION_MISMATCH: return "dimension-mismatch";
    case NDOF_ERR_NOT_POSITIVE_DEFINITE: return "not-positive-definite";
    case NDOF_ERR_OUT_OF_MEMORY: return "out-of-memory";
    case NDOF_ERR_INTERNAL: return "internal-error";
  }
  return "unknown";
}

// ---- spectra ----

int ndof_default_lmax(double ka) {
  if (!(ka > 0.0) || !std::isfinite(ka)) return 1;
  return ndof::default_lmax(ka);
}

ndof_status ndof_sphere_spectrum(int ball, double ka, ndof_loss_kind kind, double loss_value,
                                 int lmax, ndof_spectrum** out) {
  return guarded([&] {
    need(out, "out");
    const auto loss = loss_model(kind, loss_value);
    const int L = lmax > 0 ? lmax : ndof::default_lmax(ka);
    auto s = ball ? ndof::ball_spectrum(ka, loss, L) : ndof::shell_spectrum(ka, loss, L);
    *out = new ndof_spectrum{std::move(s)};
  });
}

ndof_status ndof_spectrum_from_values(const double* rho, size_t n, double ka, double wavelength,
                                      ndof_spectrum** out) {
  return guarded([&] {
    need(out, "out");
    if (n > 0) need(rho, "rho");
    ndof::RadiationSpectrum s;
    s.eigenvalues.assign(rho, rho + n);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), std::greater<>());
    s.ka = ka;
    s.wavelength = wavelength;
    s.provenance = ndof::Provenance::Ingested;
    s.validate();
    *out = new ndof_spectrum{std::move(s)};
  });
}

void ndof_spectrum_free(ndof_spectrum* spectrum) { delete spectrum; }

size_t ndof_spectrum_size(const ndof_spectrum* spectrum) {
  return spectrum ? spectrum->s.size() : 0;
}

double ndof_spectrum_ka(const ndof_spectrum* spectrum) { return spectrum ? spectrum->s.ka : 0.0; }

ndof_status ndof_spectrum_values(const ndof_spectrum* spectrum, double* rho, size_t n) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(rho, "rho");
    const auto& v = spectrum->s.eigenvalues;
    std::copy_n(v.begin(), std::min(n, v.size()), rho);
  });
}

ndof_status ndof_spectrum_label(const ndof_spectrum* spectrum, size_t index, int* tau, int* l,
                                int* m) {
  return guarded([&] {
    need(spectrum, "spectrum");
    const auto& labels = spectrum->s.labels;
    ndof::require(index < labels.size(), ndof::ErrorCode::InvalidArgument,
                  "spectrum has no label for this index");
    if (tau) *tau = labels[index].tau;
    if (l) *l = labels[index].l;
    if (m) *m = labels[index].m;
  });
}

ndof_status ndof_spectrum_report(const ndof_spectrum* spectrum, double wavelength,
                                 ndof_report* out) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(out, "out");
    const auto r = ndof::ndof_report(spectrum->s, wavelength);
    out->total_modes = r.total_modes;
    out->threshold_count = r.threshold_count;
    out->ties_at_one = r.ties_at_one;
    out->effective = r.sum_of_efficiencies > 0.0 ? r.effective
                                                 : std::numeric_limits<double>::quiet_NaN();
    out->sum_of_efficiencies = r.sum_of_efficiencies;
    out->avg_max_eff_area = r.avg_max_eff_area;
    out->last_efficiency = r.last_efficiency;
  });
}

ndof_status ndof_sum_rule_target(double volume, double wavelength, double rho_r, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ndof::sum_rule_target(volume, wavelength, rho_r);
  });
}

// ---- meshes ----

void ndof_shape_options_default(ndof_shape_options* options) {
  if (!options) return;
  const ndof::ShapeOptions d;
  *options = {d.max_edge, d.xi, d.side, d.separation, d.plate_cells};
}

size_t ndof_builtin_shape_count(void) { return ndof::builtin_shape_names().size(); }

const char* ndof_builtin_shape_name(size_t index) {
  const auto& names = ndof::builtin_shape_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

ndof_status ndof_mesh_builtin(const char* name, const ndof_shape_options* options,
                              ndof_mesh** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    ndof::ShapeOptions o;
    if (options)
      o = {options->max_edge, options->xi, options->side, options->separation,
           options->plate_cells};
    *out = new ndof_mesh{ndof::builtin_shape(name, o)};
  });
}

ndof_status ndof_mesh_load(const char* path, ndof_mesh** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new ndof_mesh{ndof::load_mesh(path)};
  });
}

ndof_status ndof_mesh_save(const ndof_mesh* mesh, const char* path) {
  return guarded([&] {
    need(mesh, "mesh");
    need(path, "path");
    ndof::save_mesh(path, mesh->m);
  });
}

void ndof_mesh_free(ndof_mesh* mesh) { delete mesh; }

ndof_status ndof_mesh_get_info(const ndof_mesh* mesh, ndof_mesh_info* out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(out, "out");
    const auto& m = mesh->m;
    out->vertices = m.vertices().size();
    out->triangles = m.triangles().size();
    out->open_surface = m.open_surface() ? 1 : 0;
    out->circumradius = m.circumradius();
    for (int i = 0; i < 3; ++i) out->center[i] = m.circumcenter()[i];
    out->surface_area = ndof::surface_area(m);
  });
}

ndof_status ndof_shadow_area(const ndof_mesh* mesh, const double direction[3], int resolution,
                             double* out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(direction, "direction");
    need(out, "out");
    *out = ndof::shadow_area(mesh->m, ndof::Vec3(direction[0], direction[1], direction[2]),
                             resolution);
  });
}

ndof_status ndof_average_shadow_area(const ndof_mesh* mesh, size_t directions, int resolution,
                                     double* average, double* per_direction) {
  return guarded([&] {
    need(mesh, "mesh");
    need(average, "average");
    const auto q = ndof::DirectionQuadrature::fibonacci(directions);
    const auto r = ndof::average_shadow_area(mesh->m, q, resolution);
    *average = r.average;
    if (per_direction) std::copy(r.per_direction.begin(), r.per_direction.end(), per_direction);
  });
}

ndof_status ndof_polar_sweep(const ndof_mesh* mesh, int n_theta, int resolution, double* theta,
                             double* area, double* average) {
  return guarded([&] {
    need(mesh, "mesh");
    const auto r = ndof::polar_sweep(mesh->m, n_theta, resolution);
    if (theta) std::copy(r.theta.begin(), r.theta.end(), theta);
    if (area) std::copy(r.area.begin(), r.area.end(), area);
    if (average) *average = r.average;
  });
}

ndof_status ndof_quadrature_directions(size_t directions, double* xyz) {
  return guarded([&] {
    need(xyz, "xyz");
    const auto q = ndof::DirectionQuadrature::fibonacci(directions);
    for (std::size_t i = 0; i < q.directions.size(); ++i)
      for (int c = 0; c < 3; ++c) xyz[3 * i + c] = q.directions[i][c];
  });
}

ndof_status ndof_weyl_estimate(int dimension, double measure, double wavelength,
                               int electromagnetic, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ndof::weyl_estimate(dimension, measure, wavelength, electromagnetic != 0);
  });
}

ndof_status ndof_asymptotic_ndof(double avg_shadow, double wavelength, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ndof::asymptotic_ndof(avg_shadow, wavelength);
  });
}

ndof_status ndof_oblate_spheroid_avg_shadow(double a, double xi, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = ndof::oblate_spheroid_avg_shadow(a, xi);
  });
}

// ---- problems ----

void ndof_discretize_options_default(ndof_discretize_options* options) {
  if (!options) return;
  *options = {1.0, ndof::kDefaultDensity, NDOF_LOSS_SURFACE, 1e-5, 0, 0};
}

ndof_status ndof_problem_from_mesh(const ndof_mesh* mesh, const ndof_discretize_options* options,
                                   ndof_problem** out) {
  return guarded([&] {
    need(mesh, "mesh");
    need(options, "options");
    need(out, "out");
    const auto& o = *options;
    ndof::require(o.wavelength > 0.0 && std::isfinite(o.wavelength),
                  ndof::ErrorCode::InvalidArgument, "wavelength must be positive");
    ndof::require(o.layers >= 0, ndof::ErrorCode::InvalidArgument, "layers must be >= 0");
    const double k = 2.0 * ndof::kPi / o.wavelength;
    const auto loss = loss_model(o.loss_kind, o.loss_value);
    auto p = std::make_unique<ndof_problem>();
    if (o.layers == 0) {
      ndof::require(loss.kind == ndof::LossKind::SurfaceResistivity, ndof::ErrorCode::KindMismatch,
                    "surface currents need a surface loss model");
      p->disc = ndof::sample_mesh(mesh->m, k, o.density, loss);
    } else {
      p->disc = ndof::sample_volume(mesh->m, k, o.layers, o.density, loss);
    }
    p->ka = k * mesh->m.circumradius();
    p->wavelength = o.wavelength;
    p->lmax = o.lmax > 0 ? o.lmax : ndof::default_lmax(p->ka);
    *out = p.release();
  });
}

ndof_status ndof_problem_load(const char* path, double ka, double wavelength,
                              ndof_problem** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    auto p = std::make_unique<ndof_problem>();
    p->pair = ndof::ingest_pair(std::string(path));
    p->ka = ka;
    p->wavelength = wavelength;
    *out = p.release();
  });
}

ndof_status ndof_problem_save(const ndof_problem* problem, const char* path) {
  return guarded([&] {
    need(problem, "problem");
    need(path, "path");
    ndof::save_pair(path, problem->resistance());
  });
}

ndof_status ndof_problem_write_points(const ndof_problem* problem, const char* path) {
  return guarded([&] {
    need(problem, "problem");
    need(path, "path");
    ndof::require(problem->disc.has_value(), ndof::ErrorCode::InvalidArgument,
                  "problem has no sample points (ingested matrices)");
    std::ofstream f(path);
    ndof::require(static_cast<bool>(f), ndof::ErrorCode::Io,
                  "cannot write '" + std::string(path) + "'");
    ndof::write_discretization_csv(f, *problem->disc);
  });
}

void ndof_problem_free(ndof_problem* problem) { delete problem; }

ndof_status ndof_problem_get_info(const ndof_problem* problem, ndof_problem_info* out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "out");
    *out = {};
    out->lmax = problem->lmax;
    out->ka = problem->ka;
    out->wavelength = problem->wavelength;
    if (problem->disc) {
      out->unknowns = static_cast<size_t>(problem->disc->unknowns());
      out->points = problem->disc->size();
      out->achieved_density = problem->disc->achieved_density;
      out->low_density = problem->disc->low_density ? 1 : 0;
      out->from_mesh = 1;
    } else {
      out->unknowns = static_cast<size_t>(problem->pair->dim());
    }
  });
}

ndof_status ndof_problem_modes(const ndof_problem* problem, ndof_solver solver,
                               ndof_spectrum** out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "out");
    const bool factored = solver == NDOF_SOLVER_FACTORED ||
                          (solver == NDOF_SOLVER_AUTO && problem->disc.has_value());
    ndof::RadiationModes m;
    if (factored) {
      ndof::require(problem->disc.has_value(), ndof::ErrorCode::InvalidArgument,
                    "the factored solver needs a discretized mesh");
      m = ndof::radiation_modes_factored(ndof::wave_matrix(*problem->disc, problem->lmax),
                                         ndof::loss_diagonal(*problem->disc), problem->ka,
                                         problem->wavelength);
    } else {
      m = ndof::radiation_modes(problem->resistance(), problem->ka, problem->wavelength);
    }
    if (!problem->disc) m.spectrum.provenance = ndof::Provenance::Ingested;
    *out = new ndof_spectrum{std::move(m.spectrum)};
  });
}

ndof_status ndof_problem_trace(const ndof_problem* problem, double* out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "out");
    if (problem->pair) {
      *out = ndof::trace_identity(*problem->pair);
      return;
    }
    // trace(D^-1 U^H U) without forming the pair.
    const auto U = ndof::wave_matrix(*problem->disc, problem->lmax);
    const auto d = ndof::loss_diagonal(*problem->disc);
    double t = 0.0;
    for (Eigen::Index j = 0; j < U.cols(); ++j) t += U.col(j).squaredNorm() / d[j];
    *out = t;
  });
}

// ---- capacity ----

ndof_status ndof_waterfill(const double* nu, size_t n, double snr, double* powers,
                           ndof_allocation* out) {
  return guarded([&] {
    need(nu, "nu");
    need(out, "out");
    ndof::ChannelProblem p{std::vector<double>(nu, nu + n), snr};
    const auto a = ndof::waterfill(p);
    if (powers) std::copy(a.powers.begin(), a.powers.end(), powers);
    out->water_level = a.water_level;
    out->capacity_bits = a.capacity_bits;
    out->active_count = a.active_count;
  });
}

ndof_status ndof_spectrum_efficiencies(const ndof_spectrum* spectrum, double* nu, size_t n) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(nu, "nu");
    const auto& v = spectrum->s.eigenvalues;
    for (std::size_t i = 0; i < std::min(n, v.size()); ++i) nu[i] = ndof::efficiency(v[i]);
  });
}

// ---- inverse source ----

ndof_status ndof_forward(const ndof_spectrum* spectrum, const double* currents,
                         double noise_level, uint64_t seed, double* data) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(currents, "currents");
    need(data, "data");
    const auto n = spectrum->s.size();
    const auto d = ndof::forward(complex_in(currents, n), spectrum->s, noise_level, seed);
    complex_out(d.coefficients, data);
  });
}

ndof_status ndof_reconstruct(const ndof_spectrum* spectrum, const double* data,
                             ndof_inverse_method method, double param, double* currents,
                             ndof_inverse_info* info) {
  return guarded([&] {
    need(spectrum, "spectrum");
    need(data, "data");
    need(currents, "currents");
    ndof::FarFieldData d{complex_in(data, spectrum->s.size()), 0.0};
    ndof::InverseSolution s;
    switch (method) {
      case NDOF_TIKHONOV: s = ndof::reconstruct_tikhonov(d, spectrum->s, param); break;
      case NDOF_TRUNCATED_SVD: s = ndof::reconstruct_svd(d, spectrum->s, param); break;
      default: ndof::fail(ndof::ErrorCode::InvalidArgument, "unknown inverse method");
    }
    complex_out(s.mode_coefficients, currents);
    if (info) *info = {s.residual, s.penalty, s.retained};
  });
}

ndof_status ndof_resolution_estimate(double surface_area, double avg_shadow, double wavelength,
                                     ndof_resolution* out) {
  return guarded([&] {
    need(out, "out");
    const auto r = ndof::resolution_estimate(surface_area, avg_shadow, wavelength);
    *out = {r.cell_length, r.radiating_fraction, r.wavelength_over_cell()};
  });
}

}  // extern "C"
