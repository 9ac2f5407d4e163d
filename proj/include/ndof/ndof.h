#ifndef NDOF_NDOF_H
#define NDOF_NDOF_H

/* C interface to libndof. All objects are opaque handles released with the
 * matching *_free function. Every call that can fail returns an ndof_status;
 * on failure ndof_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread). Complex vectors are interleaved
 * (re, im) pairs of doubles. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NDOF_BUILDING_LIBRARY)
#    define NDOF_API __declspec(dllexport)
#  else
#    define NDOF_API __declspec(dllimport)
#  endif
#else
#  define NDOF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ndof_status {
  NDOF_OK = 0,
  NDOF_ERR_INVALID_ARGUMENT = 1,
  NDOF_ERR_KIND_MISMATCH = 2,
  NDOF_ERR_DECOMPOSITION = 3,
  NDOF_ERR_UNDEFINED_RATIO = 4,
  NDOF_ERR_NO_CHANNEL = 5,
  NDOF_ERR_RANK_DEFICIENCY = 6,
  NDOF_ERR_IO = 7,
  NDOF_ERR_MALFORMED_FILE = 8,
  NDOF_ERR_DIMENSION_MISMATCH = 9,
  NDOF_ERR_NOT_POSITIVE_DEFINITE = 10,
  NDOF_ERR_OUT_OF_MEMORY = 98,
  NDOF_ERR_INTERNAL = 99
} ndof_status;

typedef enum ndof_loss_kind { NDOF_LOSS_SURFACE = 0, NDOF_LOSS_VOLUME = 1 } ndof_loss_kind;

NDOF_API const char* ndof_version(void);
NDOF_API const char* ndof_last_error(void);
NDOF_API const char* ndof_status_name(ndof_status status);

/* ---- spectra --------------------------------------------------------- */

typedef struct ndof_spectrum ndof_spectrum;

/* ceil(ka) + 10 + ceil(3 (ka)^(1/3)) */
NDOF_API int ndof_default_lmax(double ka);

/* Closed-form spectrum of a spherical shell (ball = 0) or ball (ball = 1).
 * loss_value is R_s/eta0 (surface) or k rho_r/eta0 (volume); lmax <= 0
 * selects the default truncation. */
NDOF_API ndof_status ndof_sphere_spectrum(int ball, double ka, ndof_loss_kind kind,
                                          double loss_value, int lmax, ndof_spectrum** out);
/* Spectrum from given eigenvalues (any order; stored descending). */
NDOF_API ndof_status ndof_spectrum_from_values(const double* rho, size_t n, double ka,
                                               double wavelength, ndof_spectrum** out);
NDOF_API void ndof_spectrum_free(ndof_spectrum* spectrum);

NDOF_API size_t ndof_spectrum_size(const ndof_spectrum* spectrum);
NDOF_API double ndof_spectrum_ka(const ndof_spectrum* spectrum);
/* Copies min(n, size) eigenvalues, descending. */
NDOF_API ndof_status ndof_spectrum_values(const ndof_spectrum* spectrum, double* rho, size_t n);
/* Mode label (tau, l, m); NDOF_ERR_INVALID_ARGUMENT for unlabelled spectra. */
NDOF_API ndof_status ndof_spectrum_label(const ndof_spectrum* spectrum, size_t index, int* tau,
                                         int* l, int* m);

typedef struct ndof_report {
  size_t total_modes;
  size_t threshold_count; /* rho_n >= 1 */
  size_t ties_at_one;
  double effective;       /* (sum nu)^2 / sum nu^2, NaN when undefined */
  double sum_of_efficiencies;
  double avg_max_eff_area;
  double last_efficiency;
} ndof_report;

NDOF_API ndof_status ndof_spectrum_report(const ndof_spectrum* spectrum, double wavelength,
                                          ndof_report* out);

/* 2 pi eta0 V / (lambda^2 rho_r) */
NDOF_API ndof_status ndof_sum_rule_target(double volume, double wavelength, double rho_r,
                                          double* out);

/* ---- meshes and shadow areas ----------------------------------------- */

typedef struct ndof_mesh ndof_mesh;

typedef struct ndof_shape_options {
  double max_edge;   /* relative to the circumradius */
  double xi;         /* spheroid axis ratio */
  double side;       /* plate side */
  double separation; /* two-plate separation */
  int plate_cells;
} ndof_shape_options;

NDOF_API void ndof_shape_options_default(ndof_shape_options* options);
NDOF_API size_t ndof_builtin_shape_count(void);
NDOF_API const char* ndof_builtin_shape_name(size_t index);

/* options may be NULL for defaults. */
NDOF_API ndof_status ndof_mesh_builtin(const char* name, const ndof_shape_options* options,
                                       ndof_mesh** out);
/* Native .tri or Wavefront .obj, chosen by extension. */
NDOF_API ndof_status ndof_mesh_load(const char* path, ndof_mesh** out);
NDOF_API ndof_status ndof_mesh_save(const ndof_mesh* mesh, const char* path);
NDOF_API void ndof_mesh_free(ndof_mesh* mesh);

typedef struct ndof_mesh_info {
  size_t vertices;
  size_t triangles;
  int open_surface;
  double circumradius;
  double center[3];
  double surface_area;
} ndof_mesh_info;

NDOF_API ndof_status ndof_mesh_get_info(const ndof_mesh* mesh, ndof_mesh_info* out);

NDOF_API ndof_status ndof_shadow_area(const ndof_mesh* mesh, const double direction[3],
                                      int resolution, double* out);
/* Average over a Fibonacci quadrature of `directions` points. per_direction
 * may be NULL, otherwise it receives `directions` values. */
NDOF_API ndof_status ndof_average_shadow_area(const ndof_mesh* mesh, size_t directions,
                                              int resolution, double* average,
                                              double* per_direction);
/* Shadow area for theta in (0, pi/2) at n_theta midpoints, direction
 * (sin theta, 0, cos theta); average is the sin-weighted mean. */
NDOF_API ndof_status ndof_polar_sweep(const ndof_mesh* mesh, int n_theta, int resolution,
                                      double* theta, double* area, double* average);
NDOF_API ndof_status ndof_quadrature_directions(size_t directions, double* xyz);

NDOF_API ndof_status ndof_weyl_estimate(int dimension, double measure, double wavelength,
                                        int electromagnetic, double* out);
NDOF_API ndof_status ndof_asymptotic_ndof(double avg_shadow, double wavelength, double* out);
NDOF_API ndof_status ndof_oblate_spheroid_avg_shadow(double a, double xi, double* out);

/* ---- discretized problems -------------------------------------------- */

typedef struct ndof_problem ndof_problem;

typedef enum ndof_solver {
  NDOF_SOLVER_AUTO = 0,     /* reduced (modes x modes) route when available */
  NDOF_SOLVER_DENSE = 1,    /* generalized problem on the full matrix pair */
  NDOF_SOLVER_FACTORED = 2
} ndof_solver;

typedef struct ndof_discretize_options {
  double wavelength;
  double density; /* points per wavelength^2 */
  ndof_loss_kind loss_kind;
  double loss_value;
  int lmax;   /* <= 0: default for the mesh's ka */
  int layers; /* 0: surface currents; >= 1: onion-layered volume */
} ndof_discretize_options;

NDOF_API void ndof_discretize_options_default(ndof_discretize_options* options);
NDOF_API ndof_status ndof_problem_from_mesh(const ndof_mesh* mesh,
                                            const ndof_discretize_options* options,
                                            ndof_problem** out);
/* Reads an R0/Rrho matrix container. */
NDOF_API ndof_status ndof_problem_load(const char* path, double ka, double wavelength,
                                       ndof_problem** out);
NDOF_API ndof_status ndof_problem_save(const ndof_problem* problem, const char* path);
/* CSV of sample points; only for problems built from a mesh. */
NDOF_API ndof_status ndof_problem_write_points(const ndof_problem* problem, const char* path);
NDOF_API void ndof_problem_free(ndof_problem* problem);

typedef struct ndof_problem_info {
  size_t unknowns;
  size_t points; /* 0 for ingested matrices */
  int lmax;
  double ka;
  double wavelength;
  double achieved_density;
  int low_density;
  int from_mesh;
} ndof_problem_info;

NDOF_API ndof_status ndof_problem_get_info(const ndof_problem* problem, ndof_problem_info* out);
NDOF_API ndof_status ndof_problem_modes(const ndof_problem* problem, ndof_solver solver,
                                        ndof_spectrum** out);
/* trace(Rrho^-1 R0) */
NDOF_API ndof_status ndof_problem_trace(const ndof_problem* problem, double* out);

/* ---- capacity --------------------------------------------------------- */

typedef struct ndof_allocation {
  double water_level;
  double capacity_bits;
  size_t active_count;
} ndof_allocation;

/* powers receives n values in the order of nu. */
NDOF_API ndof_status ndof_waterfill(const double* nu, size_t n, double snr, double* powers,
                                    ndof_allocation* out);
NDOF_API ndof_status ndof_spectrum_efficiencies(const ndof_spectrum* spectrum, double* nu,
                                                size_t n);

/* ---- inverse source ---------------------------------------------------- */

typedef enum ndof_inverse_method { NDOF_TIKHONOV = 0, NDOF_TRUNCATED_SVD = 1 } ndof_inverse_method;

typedef struct ndof_inverse_info {
  double residual;
  double penalty;
  size_t retained;
} ndof_inverse_info;

/* f = -sqrt(rho) I + noise, n = spectrum size, interleaved complex. */
NDOF_API ndof_status ndof_forward(const ndof_spectrum* spectrum, const double* currents,
                                  double noise_level, uint64_t seed, double* data);
/* param is delta (Tikhonov, may be +inf) or the cutoff (SVD). */
NDOF_API ndof_status ndof_reconstruct(const ndof_spectrum* spectrum, const double* data,
                                      ndof_inverse_method method, double param,
                                      double* currents, ndof_inverse_info* info);

typedef struct ndof_resolution {
  double cell_length;
  double radiating_fraction;
  double wavelength_over_cell;
} ndof_resolution;

NDOF_API ndof_status ndof_resolution_estimate(double surface_area, double avg_shadow,
                                              double wavelength, ndof_resolution* out);

#ifdef __cplusplus
}
#endif

#endif
