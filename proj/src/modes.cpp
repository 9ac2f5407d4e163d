#include "ndof/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

namespace {

double hermitian_defect(const Eigen::MatrixXcd& A) {
  const double n = A.norm();
  return n > 0.0 ? (A - A.adjoint()).norm() / n : 0.0;
}

}  // namespace

void ResistancePair::validate() const {
  require(R0.rows() == R0.cols() && Rrho.rows() == Rrho.cols(), ErrorCode::DimensionMismatch,
          "resistance matrices must be square");
  require(R0.rows() == Rrho.rows(), ErrorCode::DimensionMismatch,
          "R0 and Rrho must have equal dimension");
  require(R0.rows() > 0, ErrorCode::InvalidArgument, "empty resistance pair");
  require(R0.allFinite() && Rrho.allFinite(), ErrorCode::InvalidArgument,
          "non-finite matrix entries");
  require(hermitian_defect(R0) <= 1e-12, ErrorCode::InvalidArgument, "R0 is not Hermitian");
  require(hermitian_defect(Rrho) <= 1e-12, ErrorCode::InvalidArgument, "Rrho is not Hermitian");
}

RadiationModes radiation_modes(const ResistancePair& pair, double ka, double wavelength) {
  pair.validate();
  const Eigen::MatrixXcd Rrho = 0.5 * (pair.Rrho + pair.Rrho.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(Rrho);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure,
         "Cholesky factorization of Rrho failed: the loss matrix is not positive definite");
  const auto L = llt.matrixL();
  const auto n = pair.dim();

  // C = L^-1 R0 L^-H
  Eigen::MatrixXcd C = L.solve(pair.R0);
  C = L.solve(C.adjoint().eval());
  C = 0.5 * (C + C.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "Hermitian eigensolver did not converge");

  RadiationModes out;
  out.spectrum.ka = ka;
  out.spectrum.wavelength = wavelength;
  out.spectrum.provenance = Provenance::Discretized;
  out.spectrum.eigenvalues.resize(static_cast<std::size_t>(n));
  Eigen::MatrixXcd V(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.spectrum.eigenvalues[static_cast<std::size_t>(i)] = es.eigenvalues()[n - 1 - i];
    V.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  // Values below the noise floor (relative 1e-14) are clamped to zero.
  const double floor = 1e-14 * std::max(0.0, out.spectrum.eigenvalues.front());
  for (double& v : out.spectrum.eigenvalues)
    if (v < floor) v = 0.0;
  out.currents = L.adjoint().solve(V);
  return out;
}

RadiationModes radiation_modes_factored(const Eigen::MatrixXcd& U, const Eigen::VectorXd& loss,
                                        double ka, double wavelength) {
  require(U.cols() == loss.size() && U.cols() > 0, ErrorCode::DimensionMismatch,
          "factored modes: one loss entry per column of U");
  for (Eigen::Index i = 0; i < loss.size(); ++i)
    require(loss[i] > 0.0 && std::isfinite(loss[i]), ErrorCode::DecompositionFailure,
            "loss matrix is not positive definite");
  const Eigen::Index m = std::min(U.rows(), U.cols());
  RadiationModes out;
  out.spectrum.ka = ka;
  out.spectrum.wavelength = wavelength;
  out.spectrum.provenance = Provenance::Discretized;
  out.spectrum.eigenvalues.resize(static_cast<std::size_t>(m));
  out.currents.resize(U.cols(), m);

  // Nonzero spectrum of D^-1/2 U^H U D^-1/2 equals that of U D^-1 U^H; solve
  // whichever is smaller.
  const Eigen::VectorXd inv = loss.cwiseInverse();
  const bool by_unknowns = U.cols() <= U.rows();
  Eigen::MatrixXcd UD;
  Eigen::MatrixXcd G;
  if (by_unknowns) {
    const Eigen::VectorXd s = inv.cwiseSqrt();
    const Eigen::MatrixXcd US = U * s.asDiagonal();
    G = US.adjoint() * US;
  } else {
    UD = U * inv.asDiagonal();
    G = UD * U.adjoint();
  }
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "Hermitian eigensolver did not converge");

  const Eigen::Index g = G.rows();
  const double top = std::max(0.0, es.eigenvalues()[g - 1]);
  for (Eigen::Index i = 0; i < m; ++i) {
    double sigma = es.eigenvalues()[g - 1 - i];
    if (sigma < 1e-14 * top) sigma = 0.0;
    out.spectrum.eigenvalues[static_cast<std::size_t>(i)] = sigma;
    if (sigma <= 0.0) {
      out.currents.col(i).setZero();
    } else if (by_unknowns) {
      // I = D^-1/2 y satisfies I^H D I = 1.
      out.currents.col(i) = inv.cwiseSqrt().asDiagonal() * es.eigenvectors().col(g - 1 - i);
    } else {
      // I = D^-1 U^H q / sqrt(sigma) satisfies I^H D I = 1.
      out.currents.col(i) = UD.adjoint() * es.eigenvectors().col(g - 1 - i) / std::sqrt(sigma);
    }
  }
  return out;
}

double efficiency(double rho) {
  require(rho >= 0.0 && !std::isnan(rho), ErrorCode::InvalidArgument,
          "efficiency: rho must be non-negative");
  if (std::isinf(rho)) return 1.0;
  return rho / (1.0 + rho);
}

std::size_t ndof_threshold(const RadiationSpectrum& spectrum) {
  return static_cast<std::size_t>(std::count_if(spectrum.eigenvalues.begin(),
                                                spectrum.eigenvalues.end(),
                                                [](double r) { return r >= 1.0; }));
}

std::size_t threshold_ties(const RadiationSpectrum& spectrum) {
  return static_cast<std::size_t>(std::count(spectrum.eigenvalues.begin(),
                                             spectrum.eigenvalues.end(), 1.0));
}

double effective_ndof(const RadiationSpectrum& spectrum) {
  double s1 = 0.0, s2 = 0.0;
  for (double r : spectrum.eigenvalues) {
    const double nu = efficiency(r);
    s1 += nu;
    s2 += nu * nu;
  }
  require(s2 > 0.0, ErrorCode::UndefinedRatio,
          "effective NDoF undefined: all radiation-mode eigenvalues are zero");
  return s1 * s1 / s2;
}

double sum_rule_target(double volume, double wavelength, double rho_r) {
  require(volume > 0.0, ErrorCode::InvalidArgument, "sum rule: volume must be positive");
  require(wavelength > 0.0 && rho_r > 0.0, ErrorCode::InvalidArgument,
          "sum rule: wavelength and resistivity must be positive");
  return 2.0 * kPi * kEta0 * volume / (wavelength * wavelength * rho_r);
}

double sum_rule_residual(const RadiationSpectrum& spectrum, double volume, double wavelength,
                         double rho_r) {
  const double target = sum_rule_target(volume, wavelength, rho_r);
  const double sum =
      std::accumulate(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(), 0.0);
  return std::abs(sum - target) / target;
}

double trace_identity(const ResistancePair& pair) {
  pair.validate();
  Eigen::LLT<Eigen::MatrixXcd> llt(0.5 * (pair.Rrho + pair.Rrho.adjoint()));
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "Rrho is not positive definite");
  return llt.solve(pair.R0).trace().real();
}

double avg_max_effective_area(const RadiationSpectrum& spectrum, double wavelength) {
  require(wavelength > 0.0, ErrorCode::InvalidArgument, "wavelength must be positive");
  return wavelength * wavelength / (8.0 * kPi) * ndof_from_gain(spectrum);
}

double ndof_from_gain(const RadiationSpectrum& spectrum) {
  double s = 0.0;
  for (double r : spectrum.eigenvalues) s += efficiency(r);
  return s;
}

double max_partial_effective_area(const ResistancePair& pair, const Eigen::MatrixXcd& U,
                                  const Vec3& direction, const Vec3& polarization,
                                  double wavelength) {
  pair.validate();
  require(U.cols() == pair.dim(), ErrorCode::DimensionMismatch,
          "U must have one column per basis function");
  require(wavelength > 0.0, ErrorCode::InvalidArgument, "wavelength must be positive");
  const auto rows = static_cast<std::size_t>(U.rows());
  int lmax = 1;
  while (mode_count(lmax) < rows) ++lmax;
  require(mode_count(lmax) == rows, ErrorCode::DimensionMismatch,
          "U must have 2L(L+2) rows for some L");
  const auto a = plane_wave_coefficients(direction, polarization, lmax);
  const Eigen::VectorXcd av = Eigen::Map<const Eigen::VectorXcd>(a.data(), U.rows());
  const Eigen::VectorXcd b = U.adjoint() * av;
  Eigen::LLT<Eigen::MatrixXcd> llt(pair.R0 + pair.Rrho);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::DecompositionFailure, "R = R0 + Rrho is singular or indefinite");
  const double quad = b.dot(llt.solve(b)).real();
  return wavelength * wavelength / (16.0 * kPi * kPi) * quad;
}

NdofReport ndof_report(const RadiationSpectrum& spectrum, double wavelength) {
  NdofReport r;
  r.total_modes = spectrum.size();
  r.threshold_count = ndof_threshold(spectrum);
  r.ties_at_one = threshold_ties(spectrum);
  r.sum_of_efficiencies = ndof_from_gain(spectrum);
  r.effective = r.sum_of_efficiencies > 0.0 ? effective_ndof(spectrum) : 0.0;
  r.avg_max_eff_area = avg_max_effective_area(spectrum, wavelength);
  r.last_efficiency = spectrum.size() ? efficiency(spectrum.eigenvalues.back()) : 0.0;
  return r;
}

}  // namespace ndof
