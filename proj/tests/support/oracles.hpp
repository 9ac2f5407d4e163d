#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// library code paths the tests check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Power series of j_l(x); accurate for modest x (cancellation grows with x).
inline double sph_bessel_series(int l, double x) {
  long double term = 1.0L;
  for (int i = 1; i <= l; ++i) term *= static_cast<long double>(x) / (2 * i + 1);
  long double sum = term;
  const long double q = -0.5L * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (2.0L * l + 2 * k + 1));
    sum += term;
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Central-difference curl of a complex vector field.
inline Eigen::Vector3cd curl(const std::function<Eigen::Vector3cd(const Eigen::Vector3d&)>& f,
                             const Eigen::Vector3d& r, double h) {
  Eigen::Matrix3cd jac;  // jac(i, j) = d f_i / d x_j
  for (int j = 0; j < 3; ++j) {
    Eigen::Vector3d dp = r, dm = r;
    dp[j] += h;
    dm[j] -= h;
    jac.col(j) = (f(dp) - f(dm)) / (2 * h);
  }
  return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

// Eigenvalues of a real symmetric 2x2 matrix via the characteristic polynomial.
inline std::pair<double, double> sym2x2_eigs(double a, double b, double d) {
  const double tr = a + d, det = a * d - b * b;
  const double disc = std::sqrt(tr * tr / 4 - det);
  return {tr / 2 + disc, tr / 2 - disc};
}

}  // namespace oracle
