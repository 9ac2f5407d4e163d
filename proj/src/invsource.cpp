#include "ndof/invsource.hpp"

#include <cmath>
#include <random>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

namespace {

void check_lengths(std::size_t n, const RadiationSpectrum& spectrum) {
  require(n == spectrum.size(), ErrorCode::DimensionMismatch,
          "coefficient count does not match the spectrum");
}

}  // namespace

FarFieldData forward(const std::vector<cdouble>& modal_currents,
                     const RadiationSpectrum& spectrum, double noise_level,
                     std::uint64_t noise_seed) {
  check_lengths(modal_currents.size(), spectrum);
  require(noise_level >= 0.0 && std::isfinite(noise_level), ErrorCode::InvalidArgument,
          "noise level must be non-negative");
  FarFieldData d;
  d.noise_level = noise_level;
  d.coefficients.resize(modal_currents.size());
  std::mt19937_64 rng(noise_seed);
  // Circularly symmetric: E|n|^2 = noise_level^2.
  std::normal_distribution<double> gauss(0.0, noise_level / std::sqrt(2.0));
  for (std::size_t i = 0; i < modal_currents.size(); ++i) {
    d.coefficients[i] = -std::sqrt(spectrum.eigenvalues[i]) * modal_currents[i];
    if (noise_level > 0.0) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      d.coefficients[i] += cdouble(re, im);
    }
  }
  return d;
}

double tikhonov_objective(const std::vector<cdouble>& currents, const FarFieldData& data,
                          const RadiationSpectrum& spectrum, double delta) {
  check_lengths(currents.size(), spectrum);
  check_lengths(data.coefficients.size(), spectrum);
  double obj = 0.0;
  for (std::size_t i = 0; i < currents.size(); ++i) {
    const double rho = spectrum.eigenvalues[i];
    const cdouble f = data.coefficients[i];
    obj += (rho + delta) * std::norm(currents[i]) +
           2.0 * std::real(std::conj(f) * currents[i]) * std::sqrt(rho) + std::norm(f);
  }
  return obj;
}

InverseSolution reconstruct_tikhonov(const FarFieldData& data, const RadiationSpectrum& spectrum,
                                     double delta) {
  check_lengths(data.coefficients.size(), spectrum);
  require(delta >= 0.0 && !std::isnan(delta), ErrorCode::InvalidArgument,
          "delta must be non-negative");
  InverseSolution s;
  s.method = InverseMethod::Tikhonov;
  s.regularization = delta;
  s.mode_coefficients.resize(data.coefficients.size());
  for (std::size_t i = 0; i < data.coefficients.size(); ++i) {
    const double rho = spectrum.eigenvalues[i];
    if (std::isinf(delta)) {
      s.mode_coefficients[i] = 0.0;
      continue;
    }
    if (rho + delta <= 0.0)
      fail(ErrorCode::RankDeficiency,
           "delta = 0 with a zero radiation-mode eigenvalue: the problem is rank deficient");
    s.mode_coefficients[i] = -std::sqrt(rho) / (delta + rho) * data.coefficients[i];
    if (rho > 0.0) ++s.retained;
  }
  for (std::size_t i = 0; i < data.coefficients.size(); ++i) {
    s.residual += std::norm(std::sqrt(spectrum.eigenvalues[i]) * s.mode_coefficients[i] +
                            data.coefficients[i]);
    if (!std::isinf(delta)) s.penalty += delta * std::norm(s.mode_coefficients[i]);
  }
  return s;
}

InverseSolution reconstruct_svd(const FarFieldData& data, const RadiationSpectrum& spectrum,
                                double cutoff) {
  check_lengths(data.coefficients.size(), spectrum);
  require(cutoff > 0.0, ErrorCode::InvalidArgument, "SVD cutoff must be positive");
  InverseSolution s;
  s.method = InverseMethod::TruncatedSVD;
  s.regularization = cutoff;
  s.mode_coefficients.assign(data.coefficients.size(), 0.0);
  for (std::size_t i = 0; i < data.coefficients.size(); ++i) {
    const double rho = spectrum.eigenvalues[i];
    if (rho >= cutoff) {
      s.mode_coefficients[i] = -data.coefficients[i] / std::sqrt(rho);
      ++s.retained;
    }
    s.residual += std::norm(std::sqrt(rho) * s.mode_coefficients[i] + data.coefficients[i]);
  }
  return s;
}

double ResolutionEstimate::wavelength_over_cell() const { return wavelength / cell_length; }

ResolutionEstimate resolution_estimate(double surface_area, double avg_shadow, double wavelength) {
  require(surface_area > 0.0 && avg_shadow > 0.0 && wavelength > 0.0,
          ErrorCode::InvalidArgument, "resolution estimate needs positive inputs");
  ResolutionEstimate r;
  r.cell_length = std::sqrt(surface_area * wavelength * wavelength / (4.0 * kPi * avg_shadow));
  r.radiating_fraction = 4.0 * avg_shadow / surface_area;
  r.wavelength = wavelength;
  return r;
}

}  // namespace ndof
