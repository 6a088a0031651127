#pragma once

#include <numbers>

// All library code works in SI units (meters, radians).  The CLI and file
// formats speak mm / urad / nm; conversions are exact decimal scalings done
// once at the boundary.
namespace tiltsense::units {

constexpr double mm_to_m(double v) { return v * 1e-3; }
constexpr double m_to_mm(double v) { return v * 1e3; }

constexpr double mm2_to_m2(double v) { return v * 1e-6; }
constexpr double m2_to_mm2(double v) { return v * 1e6; }

constexpr double urad_to_rad(double v) { return v * 1e-6; }
constexpr double rad_to_urad(double v) { return v * 1e6; }

/// k = 2*pi / lambda for a wavelength given in nanometers, in rad/m.
constexpr double wavenumber_from_lambda_nm(double lambda_nm) {
  return 2.0 * std::numbers::pi / (lambda_nm * 1e-9);
}

}  // namespace tiltsense::units
