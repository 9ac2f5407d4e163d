#pragma once

#include <numbers>

namespace ndof {

inline constexpr double kPi = std::numbers::pi;
// Free-space wave impedance (Ohm), CODATA 2018.
inline constexpr double kEta0 = 376.730313668;

inline constexpr double wavenumber(double wavelength) { return 2.0 * kPi / wavelength; }

}  // namespace ndof
