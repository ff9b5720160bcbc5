#pragma once

#include <numbers>

namespace casimir::constants {

// CODATA 2018 exact/recommended values, SI units.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double c = 2.99792458e8;              // m/s
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double elementary_charge = 1.602176634e-19;  // C

inline constexpr double pi = std::numbers::pi;
inline constexpr double zeta3 = 1.2020569031595942854;  // Apery's constant

inline constexpr const char* version_tag = "CODATA2018";

/// rad/s per eV of photon energy.
inline constexpr double rad_per_s_per_eV = elementary_charge / hbar;

constexpr double ev_to_rad_per_s(double ev) { return ev * rad_per_s_per_eV; }

/// Thermal wavenumber k_B T / (hbar c), in 1/m.
constexpr double thermal_wavenumber(double temperature) {
  return k_B * temperature / (hbar * c);
}

/// Matsubara frequency zeta_m = 2 pi m k_B T / hbar.
constexpr double matsubara_frequency(long m, double temperature) {
  return 2.0 * pi * static_cast<double>(m) * k_B * temperature / hbar;
}

}  // namespace casimir::constants
