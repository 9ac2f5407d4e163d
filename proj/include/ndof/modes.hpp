#pragma once

// Radiation modes R0 I = rho Rrho I, efficiencies, NDoF counters, the sum
// rule and the effective-area identities.

#include <cstddef>

#include <Eigen/Dense>

#include "ndof/sphwave.hpp"

namespace ndof {

struct ResistancePair {
  Eigen::MatrixXcd R0;    // radiation resistance, Hermitian PSD
  Eigen::MatrixXcd Rrho;  // material loss, Hermitian PD

  Eigen::Index dim() const { return R0.rows(); }
  // Shape and Hermiticity checks (relative 1e-12). Positive definiteness of
  // Rrho is checked by the factorization in radiation_modes.
  void validate() const;
};

struct RadiationModes {
  RadiationSpectrum spectrum;
  Eigen::MatrixXcd currents;  // column n is I_n, with I_m^H Rrho I_n = delta_mn
};

RadiationModes radiation_modes(const ResistancePair& pair, double ka = 0.0,
                               double wavelength = 1.0);

// Same spectrum for R0 = U^H U and a diagonal loss matrix, solved through
// the (modes x modes) matrix U D^-1 U^H. Only the min(rows, cols) leading
// modes are returned; the rest lie in the null space of U and have rho = 0.
// Currents of zero-rho modes are left zero.
RadiationModes radiation_modes_factored(const Eigen::MatrixXcd& U, const Eigen::VectorXd& loss,
                                        double ka = 0.0, double wavelength = 1.0);

double efficiency(double rho);

// Count of rho_n >= 1; exact ties are included.
std::size_t ndof_threshold(const RadiationSpectrum& spectrum);
std::size_t threshold_ties(const RadiationSpectrum& spectrum);

// (sum nu)^2 / sum nu^2
double effective_ndof(const RadiationSpectrum& spectrum);

// 2 pi eta0 V / (lambda^2 rho_r); rho_r in Ohm m.
double sum_rule_target(double volume, double wavelength, double rho_r);
double sum_rule_residual(const RadiationSpectrum& spectrum, double volume, double wavelength,
                         double rho_r);

// trace(Rrho^-1 R0), equal to sum rho_n.
double trace_identity(const ResistancePair& pair);

// lambda^2/(8 pi) sum nu_n
double avg_max_effective_area(const RadiationSpectrum& spectrum, double wavelength);
// sum nu_n, which is twice the average maximal partial gain.
double ndof_from_gain(const RadiationSpectrum& spectrum);

// lambda^2/(16 pi^2) a^H U R^-1 U^H a with R = R0 + Rrho and a the plane-wave
// coefficients for (direction, polarization). U has one row per mode.
double max_partial_effective_area(const ResistancePair& pair, const Eigen::MatrixXcd& U,
                                  const Vec3& direction, const Vec3& polarization,
                                  double wavelength);

struct NdofReport {
  std::size_t total_modes = 0;
  std::size_t threshold_count = 0;
  std::size_t ties_at_one = 0;
  double effective = 0.0;
  double sum_of_efficiencies = 0.0;
  double avg_max_eff_area = 0.0;
  double last_efficiency = 0.0;  // truncation indicator for sum nu_n
};

NdofReport ndof_report(const RadiationSpectrum& spectrum, double wavelength);

}  // namespace ndof
