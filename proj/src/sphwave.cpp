#include "ndof/sphwave.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ndof/constants.hpp"
#include "ndof/error.hpp"

namespace ndof {

std::size_t ModeIndex::linear() const {
  require(valid(), ErrorCode::InvalidArgument, "ModeIndex out of range");
  return static_cast<std::size_t>(2 * (l * (l + 1) + m - 1) + tau - 1);
}

ModeIndex ModeIndex::from_linear(std::size_t n) {
  const auto half = static_cast<long>(n / 2);  // l(l+1) + m - 1
  const int tau = static_cast<int>(n % 2) + 1;
  int l = static_cast<int>(std::sqrt(static_cast<double>(half + 1)));
  while (l * l > half + 1) --l;
  while ((l + 1) * (l + 1) <= half + 1) ++l;
  const int m = static_cast<int>(half + 1 - static_cast<long>(l) * (l + 1));
  return {tau, l, m};
}

std::size_t mode_count(int L) {
  require(L >= 1, ErrorCode::InvalidArgument, "mode_count: L must be >= 1");
  return static_cast<std::size_t>(2 * L * (L + 2));
}

int default_lmax(double ka) {
  require(ka > 0.0 && std::isfinite(ka), ErrorCode::InvalidArgument, "ka must be positive");
  return static_cast<int>(std::ceil(ka) + 10 + std::ceil(3.0 * std::cbrt(ka)));
}

LossModel LossModel::surface(double rs_over_eta0) {
  require(rs_over_eta0 > 0.0 && std::isfinite(rs_over_eta0), ErrorCode::InvalidArgument,
          "surface resistivity must be positive");
  return {LossKind::SurfaceResistivity, rs_over_eta0};
}

LossModel LossModel::volume(double k_rho_over_eta0) {
  require(k_rho_over_eta0 > 0.0 && std::isfinite(k_rho_over_eta0), ErrorCode::InvalidArgument,
          "volume resistivity must be positive");
  return {LossKind::VolumeResistivity, k_rho_over_eta0};
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::AnalyticShell: return "analytic-shell";
    case Provenance::AnalyticBall: return "analytic-ball";
    case Provenance::Discretized: return "discretized";
    case Provenance::Ingested: return "ingested";
  }
  return "unknown";
}

std::vector<double> RadiationSpectrum::efficiencies() const {
  std::vector<double> nu(eigenvalues.size());
  std::transform(eigenvalues.begin(), eigenvalues.end(), nu.begin(),
                 [](double r) { return r / (1.0 + r); });
  return nu;
}

void RadiationSpectrum::validate() const {
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    require(std::isfinite(eigenvalues[i]) && eigenvalues[i] >= 0.0, ErrorCode::InvalidArgument,
            "spectrum values must be finite and non-negative");
    if (i > 0)
      require(eigenvalues[i] <= eigenvalues[i - 1], ErrorCode::InvalidArgument,
              "spectrum must be sorted descending");
  }
}

// ---------------------------------------------------------------------------
// Radial functions

std::vector<double> spherical_bessel_j(int lmax, double x) {
  require(lmax >= 0, ErrorCode::InvalidArgument, "lmax must be >= 0");
  require(x >= 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, "x must be >= 0");
  std::vector<double> j(static_cast<std::size_t>(lmax) + 1, 0.0);
  if (x == 0.0) {
    j[0] = 1.0;
    return j;
  }
  j[0] = std::sin(x) / x;
  if (lmax == 0) return j;

  // Upward recurrence is stable while l < x.
  const int l_up = std::min(lmax, static_cast<int>(std::floor(x)));
  int base = 0;
  if (l_up >= 1) {
    j[1] = (j[0] - std::cos(x)) / x;
    for (int l = 1; l < l_up; ++l) j[l + 1] = (2 * l + 1) / x * j[l] - j[l - 1];
    base = std::abs(j[l_up]) >= std::abs(j[l_up - 1]) ? l_up : l_up - 1;
  }
  if (base >= lmax) return j;

  // Ratios r_l = j_l / j_{l-1} from the continued fraction, started far enough
  // above both lmax and the turning point l ~ x.
  const int n_start =
      std::max(lmax, static_cast<int>(std::ceil(x))) + 30 + static_cast<int>(8.0 * std::cbrt(x));
  std::vector<double> ratio(static_cast<std::size_t>(lmax) + 1, 0.0);
  double r = 0.0;
  for (int l = n_start; l > base; --l) {
    r = x / (2 * l + 1 - x * r);
    if (l <= lmax) ratio[l] = r;
  }
  for (int l = base + 1; l <= lmax; ++l) j[l] = j[l - 1] * ratio[l];
  return j;
}

namespace {

// Eigen's cross() conjugates complex results; this one does not.
CVec3 cross_real(const CVec3& a, const Vec3& b) {
  return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(),
          a.x() * b.y() - a.y() * b.x()};
}

// R_{2,l}(x) = j_{l-1}(x) - l j_l(x)/x, with R_{2,0} = j_0/x - j_1.
double radial2(const std::vector<double>& j, int l, double x) {
  if (l == 0) return j[0] / x - j[1];
  return j[l - 1] - l * j[l] / x;
}

}  // namespace

double radial_function(int tau, int l, double x) {
  require(tau == 1 || tau == 2, ErrorCode::InvalidArgument, "tau must be 1 or 2");
  require(l >= 0, ErrorCode::InvalidArgument, "l must be >= 0");
  require(x > 0.0 && std::isfinite(x), ErrorCode::InvalidArgument, "x must be > 0");
  const auto j = spherical_bessel_j(l + 1, x);
  return tau == 1 ? j[l] : radial2(j, l, x);
}

// ---------------------------------------------------------------------------
// Angular functions

VectorHarmonics vector_harmonics(const Vec3& direction, int lmax) {
  require(lmax >= 1, ErrorCode::InvalidArgument, "lmax must be >= 1");
  const double rn = direction.norm();
  require(rn > 0.0 && std::isfinite(rn), ErrorCode::InvalidArgument, "direction must be nonzero");
  const Vec3 d = direction / rn;
  const double ct = std::clamp(d.z(), -1.0, 1.0);
  const double st = std::hypot(d.x(), d.y());
  const double phi = st > 0.0 ? std::atan2(d.y(), d.x()) : 0.0;
  const Vec3 r_hat = d;
  const Vec3 theta_hat(ct * std::cos(phi), ct * std::sin(phi), -st);
  const Vec3 phi_hat(-std::sin(phi), std::cos(phi), 0.0);

  const std::size_t nslots = static_cast<std::size_t>((lmax + 1) * (lmax + 1) - 1);
  VectorHarmonics out;
  out.lmax = lmax;
  out.y.assign(nslots, 0.0);
  out.a1.assign(nslots, CVec3::Zero());
  out.a2.assign(nslots, CVec3::Zero());

  // Normalized Legendre functions for fixed m; pbar = P_l^m, qbar = P_l^m / sin
  // (m >= 1, regular at the poles), dbar = d P_l^m / d theta.
  std::vector<double> pbar(lmax + 1), qbar(lmax + 1), dbar(lmax + 1);
  double pmm = 1.0 / std::sqrt(4.0 * kPi);  // P_m^m
  double qmm = 0.0;                         // P_m^m / sin
  for (int m = 0; m <= lmax; ++m) {
    if (m >= 1) {
      const double c = -std::sqrt((2.0 * m + 1.0) / (2.0 * m));
      qmm = c * pmm;  // previous P_{m-1}^{m-1} times the factor, sin^(m-1)
      pmm = qmm * st;
    }
    std::fill(pbar.begin(), pbar.end(), 0.0);
    std::fill(qbar.begin(), qbar.end(), 0.0);
    pbar[m] = pmm;
    qbar[m] = qmm;
    if (m + 1 <= lmax) {
      pbar[m + 1] = std::sqrt(2.0 * m + 3.0) * ct * pmm;
      qbar[m + 1] = std::sqrt(2.0 * m + 3.0) * ct * qmm;
    }
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
      const double b = std::sqrt((double(l - 1) * (l - 1) - double(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      pbar[l] = a * (ct * pbar[l - 1] - b * pbar[l - 2]);
      qbar[l] = a * (ct * qbar[l - 1] - b * qbar[l - 2]);
    }
    if (m >= 1) {
      for (int l = m; l <= lmax; ++l) {
        const double prev =
            l - 1 >= m ? std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) /
                                   (2.0 * l - 1.0)) * qbar[l - 1]
                       : 0.0;
        dbar[l] = l * ct * qbar[l] - prev;
      }
    }
    const cdouble eimphi = std::polar(1.0, m * phi);
    // m = 0 gradients need P_l^1 and are filled during the m = 1 pass.
    for (int l = std::max(m, 1); m >= 1 && l <= lmax; ++l) {
      const double dtheta = dbar[l];
      const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
      const cdouble y = pbar[l] * eimphi;
      const CVec3 grad = (theta_hat.cast<cdouble>() * dtheta +
                          phi_hat.cast<cdouble>() * cdouble(0.0, m * qbar[l])) *
                         eimphi;
      const CVec3 a2 = grad * norm;
      const CVec3 a1 = cross_real(a2, r_hat);
      const std::size_t sp = VectorHarmonics::slot(l, m);
      const std::size_t sn = VectorHarmonics::slot(l, -m);
      out.y[sp] = y;
      out.a1[sp] = a1;
      out.a2[sp] = a2;
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      out.y[sn] = sign * std::conj(y);
      out.a1[sn] = sign * a1.conjugate();
      out.a2[sn] = sign * a2.conjugate();
    }
    if (m == 0) {
      // Keep P_l^0 for the m = 0 pass, which needs P_l^1 / sin from m = 1.
      for (int l = 1; l <= lmax; ++l) out.y[VectorHarmonics::slot(l, 0)] = pbar[l];
    }
    if (m == 1) {
      for (int l = 1; l <= lmax; ++l) {
        const double dtheta = std::sqrt(double(l) * (l + 1)) * st * qbar[l];
        const double norm = 1.0 / std::sqrt(double(l) * (l + 1));
        const CVec3 a2 = theta_hat.cast<cdouble>() * (dtheta * norm);
        const std::size_t s0 = VectorHarmonics::slot(l, 0);
        out.a2[s0] = a2;
        out.a1[s0] = cross_real(a2, r_hat);
      }
    }
  }
  return out;
}

std::vector<CVec3> regular_waves(const Vec3& r, double k, int lmax) {
  require(k > 0.0, ErrorCode::InvalidArgument, "wavenumber must be positive");
  const double rn = r.norm();
  const double x = k * rn;
  const Vec3 dir = rn > 0.0 ? Vec3(r / rn) : Vec3::UnitZ();
  const VectorHarmonics h = vector_harmonics(dir, lmax);
  const auto j = spherical_bessel_j(lmax + 1, x);

  std::vector<CVec3> u(mode_count(lmax));
  const CVec3 rhat = dir.cast<cdouble>();
  for (int l = 1; l <= lmax; ++l) {
    double r2, j_over_x;
    if (x == 0.0) {
      r2 = l == 1 ? 2.0 / 3.0 : 0.0;
      j_over_x = l == 1 ? 1.0 / 3.0 : 0.0;
    } else {
      r2 = radial2(j, l, x);
      j_over_x = j[l] / x;
    }
    const double lnorm = std::sqrt(double(l) * (l + 1));
    for (int m = -l; m <= l; ++m) {
      const std::size_t s = VectorHarmonics::slot(l, m);
      const std::size_t n1 = ModeIndex{1, l, m}.linear();
      u[n1] = j[l] * h.a1[s];
      u[n1 + 1] = r2 * h.a2[s] + (lnorm * j_over_x) * h.y[s] * rhat;
    }
  }
  return u;
}

std::vector<cdouble> plane_wave_coefficients(const Vec3& direction, const Vec3& polarization,
                                             int lmax) {
  require(std::abs(direction.norm() - 1.0) < 1e-9, ErrorCode::InvalidArgument,
          "direction must be a unit vector");
  require(std::abs(polarization.norm() - 1.0) < 1e-9, ErrorCode::InvalidArgument,
          "polarization must be a unit vector");
  require(std::abs(direction.dot(polarization)) < 1e-9, ErrorCode::InvalidArgument,
          "polarization must be orthogonal to direction");
  const VectorHarmonics h = vector_harmonics(direction, lmax);
  const CVec3 e = polarization.cast<cdouble>();
  std::vector<cdouble> a(mode_count(lmax));
  static constexpr cdouble kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int l = 1; l <= lmax; ++l) {
    for (int m = -l; m <= l; ++m) {
      const std::size_t s = VectorHarmonics::slot(l, m);
      const std::size_t n1 = ModeIndex{1, l, m}.linear();
      // e . conj(A) with the i^(l - tau + 1) phase of the plane-wave expansion.
      a[n1] =4.0 * kPi * kIPow[l % 4] * (h.a1[s].conjugate().transpose() * e)(0);
      a[n1 + 1] = 4.0 * kPi * kIPow[(l + 3) % 4] * (h.a2[s].conjugate().transpose() * e)(0);
    }
  }
  return a;
}

Eigen::MatrixXcd regular_wave_matrix(std::span<const Vec3> points, std::span<const Vec3> tangent1,
                                     std::span<const Vec3> tangent2,
                                     std::span<const double> weights, double k, int lmax) {
  require(!points.empty(), ErrorCode::InvalidArgument, "regular_wave_matrix: empty point set");
  require(tangent1.size() == points.size() && tangent2.size() == points.size(),
          ErrorCode::DimensionMismatch, "regular_wave_matrix: one tangent pair per point");
  require(weights.empty() || weights.size() == points.size(), ErrorCode::DimensionMismatch,
          "regular_wave_matrix: one weight per point");
  require(k > 0.0, ErrorCode::InvalidArgument, "wavenumber must be positive");
  const std::size_t nmodes = mode_count(lmax);
  const auto npts = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXcd U(static_cast<Eigen::Index>(nmodes), 2 * npts);
  const double scale = k * std::sqrt(kEta0);
  for (const Vec3& p : points)
    require(p.allFinite(), ErrorCode::InvalidArgument, "non-finite sample point");

#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index j = 0; j < npts; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double w = weights.empty() ? 1.0 : weights[ju];
    const auto u = regular_waves(points[ju], k, lmax);
    const CVec3 t1 = tangent1[ju].cast<cdouble>();
    const CVec3 t2 = tangent2[ju].cast<cdouble>();
    for (std::size_t n = 0; n < nmodes; ++n) {
      const CVec3 uc = u[n].conjugate();
      const auto row = static_cast<Eigen::Index>(n);
      U(row, 2 * j) = scale * w * t1.dot(uc);
      U(row, 2 * j + 1) = scale * w * t2.dot(uc);
    }
  }
  return U;
}

// ---------------------------------------------------------------------------
// Closed-form sphere spectra

namespace {

RadiationSpectrum sorted_spectrum(std::vector<double> values, std::vector<ModeIndex> labels,
                                  double ka, Provenance prov) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  RadiationSpectrum s;
  s.ka = ka;
  s.wavelength = 1.0;
  s.provenance = prov;
  s.eigenvalues.reserve(values.size());
  s.labels.reserve(values.size());
  for (std::size_t i : order) {
    s.eigenvalues.push_back(values[i]);
    s.labels.push_back(labels[i]);
  }
  return s;
}

}  // namespace

RadiationSpectrum shell_spectrum(double ka, const LossModel& loss, int lmax) {
  require(ka > 0.0 && std::isfinite(ka), ErrorCode::InvalidArgument, "ka must be positive");
  require(lmax >= 1, ErrorCode::InvalidArgument, "lmax must be >= 1");
  require(loss.kind == LossKind::SurfaceResistivity, ErrorCode::KindMismatch,
          "shell spectrum needs a surface resistivity");
  require(loss.value_normalized > 0.0, ErrorCode::InvalidArgument, "loss must be positive");
  const auto j = spherical_bessel_j(lmax + 1, ka);
  const double pref = ka * ka / loss.value_normalized;
  std::vector<double> values;
  std::vector<ModeIndex> labels;
  values.reserve(mode_count(lmax));
  for (int l = 1; l <= lmax; ++l) {
    const double r1 = j[l];
    const double r2 = radial2(j, l, ka);
    for (int m = -l; m <= l; ++m) {
      values.push_back(pref * r1 * r1);
      labels.push_back({1, l, m});
      values.push_back(pref * r2 * r2);
      labels.push_back({2, l, m});
    }
  }
  return sorted_spectrum(std::move(values), std::move(labels), ka, Provenance::AnalyticShell);
}

RadiationSpectrum ball_spectrum(double ka, const LossModel& loss, int lmax) {
  require(ka > 0.0 && std::isfinite(ka), ErrorCode::InvalidArgument, "ka must be positive");
  require(lmax >= 1, ErrorCode::InvalidArgument, "lmax must be >= 1");
  require(loss.kind == LossKind::VolumeResistivity, ErrorCode::KindMismatch,
          "ball spectrum needs a volume resistivity");
  require(loss.value_normalized > 0.0, ErrorCode::InvalidArgument, "loss must be positive");
  const auto j = spherical_bessel_j(lmax + 1, ka);
  // k^2 a^3 eta0 / (2 rho_r) = (ka)^3 / (2 k rho_r / eta0)
  const double pref = ka * ka * ka / (2.0 * loss.value_normalized);
  std::vector<double> values;
  std::vector<ModeIndex> labels;
  values.reserve(mode_count(lmax));
  for (int l = 1; l <= lmax; ++l) {
    const double te = j[l] * j[l] - j[l - 1] * j[l + 1];
    const double tm = te + 2.0 / ka * j[l] * radial2(j, l, ka);
    for (int m = -l; m <= l; ++m) {
      values.push_back(std::max(0.0, pref * te));
      labels.push_back({1, l, m});
      values.push_back(std::max(0.0, pref * tm));
      labels.push_back({2, l, m});
    }
  }
  return sorted_spectrum(std::move(values), std::move(labels), ka, Provenance::AnalyticBall);
}

}  // namespace ndof
