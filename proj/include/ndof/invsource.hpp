#pragma once

// Inverse source reconstruction in the radiation-mode basis. Far-field data
// f_n are coefficients along the normalized radiated fields of the modes,
// f = -sqrt(rho) I + noise, and the regularization weight delta plays the
// role of a normalized loss (the penalty is delta * sum |I_n|^2).

#include <cstdint>
#include <vector>

#include "ndof/sphwave.hpp"

namespace ndof {

struct FarFieldData {
  std::vector<cdouble> coefficients;
  double noise_level = 0.0;  // standard deviation of each complex coefficient
};

enum class InverseMethod { Tikhonov, TruncatedSVD };

struct InverseSolution {
  std::vector<cdouble> mode_coefficients;
  double regularization = 0.0;  // delta for Tikhonov, cutoff for SVD
  InverseMethod method = InverseMethod::Tikhonov;
  double residual = 0.0;  // sum |sqrt(rho) I + f|^2
  double penalty = 0.0;   // delta sum |I|^2 (zero for SVD)
  std::size_t retained = 0;
};

FarFieldData forward(const std::vector<cdouble>& modal_currents,
                     const RadiationSpectrum& spectrum, double noise_level,
                     std::uint64_t noise_seed);

InverseSolution reconstruct_tikhonov(const FarFieldData& data, const RadiationSpectrum& spectrum,
                                     double delta);

// Modes with rho_n < cutoff are dropped.
InverseSolution reconstruct_svd(const FarFieldData& data, const RadiationSpectrum& spectrum,
                                double cutoff);

// Objective sum (rho+delta)|I|^2 + 2 Re(conj(f) sqrt(rho) I) + |f|^2.
double tikhonov_objective(const std::vector<cdouble>& currents, const FarFieldData& data,
                          const RadiationSpectrum& spectrum, double delta);

struct ResolutionEstimate {
  double cell_length;         // sqrt(A lambda^2 / (4 pi <A_s>))
  double radiating_fraction;  // 4 <A_s> / A
  double wavelength;
  double wavelength_over_cell() const;
};

ResolutionEstimate resolution_estimate(double surface_area, double avg_shadow, double wavelength);

}  // namespace ndof
