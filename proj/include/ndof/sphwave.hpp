#pragma once

// Spherical vector-wave machinery: mode labels, regular radial functions,
// vector spherical harmonics, plane-wave coefficients, the wave-projection
// matrix U and the closed-form radiation-mode spectra of spheres.
//
// Conventions
//   * Complex orthonormal spherical harmonics with the Condon-Shortley phase,
//     Y_{l,-m} = (-1)^m conj(Y_{l,m}).
//   * A_1 = A_2 x r^, A_2 = grad_S Y / sqrt(l(l+1)), A_3 = r^ Y.
//   * Regular waves u_1 = j_l(kr) A_1,
//                   u_2 = R_{2,l}(kr) A_2 + sqrt(l(l+1)) j_l(kr)/(kr) A_3,
//     so that u_2 = curl(u_1)/k.
//   * Linear mode index (zero based): n = 2(l(l+1) + m - 1) + tau - 1.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ndof {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using cdouble = std::complex<double>;

struct ModeIndex {
  int tau = 1;  // 1: TE-like (A_1), 2: TM-like (A_2)
  int l = 1;
  int m = 0;

  std::size_t linear() const;
  static ModeIndex from_linear(std::size_t n);
  bool valid() const { return (tau == 1 || tau == 2) && l >= 1 && m >= -l && m <= l; }
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

// Number of modes with degree l <= L, i.e. 2L(L+2).
std::size_t mode_count(int L);

// Degree truncation used when the caller does not choose one:
// ceil(ka) + 10 + ceil(3 (ka)^(1/3)).
int default_lmax(double ka);

enum class LossKind { SurfaceResistivity, VolumeResistivity };

// Loss normalized to the free-space impedance: R_s/eta0 for sheets,
// k rho_r/eta0 for bulk material.
struct LossModel {
  LossKind kind = LossKind::SurfaceResistivity;
  double value_normalized = 1.0;

  static LossModel surface(double rs_over_eta0);
  static LossModel volume(double k_rho_over_eta0);
};

enum class Provenance { AnalyticShell, AnalyticBall, Discretized, Ingested };

const char* to_string(Provenance p);

struct RadiationSpectrum {
  std::vector<double> eigenvalues;  // rho_n, sorted descending
  double ka = 0.0;
  double wavelength = 1.0;
  Provenance provenance = Provenance::Ingested;
  std::vector<ModeIndex> labels;  // filled for analytic spectra only

  std::size_t size() const { return eigenvalues.size(); }
  std::vector<double> efficiencies() const;
  // Throws InvalidArgument unless the values are non-negative and sorted.
  void validate() const;
};

// j_0(x) .. j_lmax(x). Downward ratio recurrence above l ~ x, upward below.
std::vector<double> spherical_bessel_j(int lmax, double x);

// Regular radial functions R_{tau,l}(x): j_l(x) for tau = 1,
// (x j_l(x))'/x for tau = 2.
double radial_function(int tau, int l, double x);

// Values of Y_lm, A_1 and A_2 at a direction, indexed l*l + l + m - 1
// (l >= 1). The direction need not be normalized.
struct VectorHarmonics {
  int lmax = 0;
  std::vector<cdouble> y;
  std::vector<CVec3> a1;
  std::vector<CVec3> a2;

  static std::size_t slot(int l, int m) { return static_cast<std::size_t>(l * l + l + m - 1); }
};

VectorHarmonics vector_harmonics(const Vec3& direction, int lmax);

// Regular vector waves u_n(k r) for every mode with l <= lmax.
std::vector<CVec3> regular_waves(const Vec3& r, double k, int lmax);

// Coefficients a_n of the plane wave e exp(i k k^.r) = sum_n a_n u_n(k r).
std::vector<cdouble> plane_wave_coefficients(const Vec3& direction, const Vec3& polarization,
                                             int lmax);

// Rows: modes (l <= lmax). Columns: point dipoles, two per point (t1, t2).
// U(n, 2j+s) = k sqrt(eta0) w_j t_s . conj(u_n(k r_j)), so U I are the
// outgoing spherical-wave coefficients of the sampled current and U^H U is
// the radiation resistance matrix in Ohm m^2. Empty weights means unit
// weights.
Eigen::MatrixXcd regular_wave_matrix(std::span<const Vec3> points,
                                     std::span<const Vec3> tangent1,
                                     std::span<const Vec3> tangent2,
                                     std::span<const double> weights, double k, int lmax);

RadiationSpectrum shell_spectrum(double ka, const LossModel& loss, int lmax);
RadiationSpectrum ball_spectrum(double ka, const LossModel& loss, int lmax);

}  // namespace ndof
