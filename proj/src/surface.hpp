#pragma once

#include <cmath>
#include <limits>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir::detail {

/// A half-space frozen at one imaginary frequency: eps(i zeta) is evaluated
/// once, reflection coefficients then follow for any kappa0.
struct Surface {
  enum class Kind { Perfect, Dielectric, ZeroVanishing, ZeroFinite };
  Kind kind = Kind::Perfect;
  double eps = 1.0;
  /// (eps - 1) zeta^2 / c^2 for Dielectric, lim zeta^2 eps / c^2 for ZeroFinite.
  double excess = 0.0;

  Reflection at(double kappa0) const {
    switch (kind) {
      case Kind::Perfect:
        return {1.0, -1.0};
      case Kind::ZeroVanishing:
        return {0.0, -1.0};
      case Kind::ZeroFinite: {
        const double k = std::sqrt(kappa0 * kappa0 + excess);
        const double s = k + kappa0;
        return {excess / (s * s), -1.0};
      }
      case Kind::Dielectric:
      default: {
        const double k = std::sqrt(kappa0 * kappa0 + excess);
        const double s = k + kappa0;
        // (kappa - kappa0)/(kappa + kappa0) without cancellation.
        return {excess / (s * s), (k - eps * kappa0) / (k + eps * kappa0)};
      }
    }
  }

  /// Wavenumber inside the medium; infinite for a perfect conductor.
  double medium_kappa(double kappa0) const {
    switch (kind) {
      case Kind::Perfect:
        return std::numeric_limits<double>::infinity();
      case Kind::ZeroVanishing:
        return kappa0;
      default:
        return std::sqrt(kappa0 * kappa0 + excess);
    }
  }
};

/// zeta = 0 is served by the model's analytic limit, never by eps(0).
inline Surface surface_at(const DielectricModel& model, double zeta) {
  if (model.is_ideal()) return {Surface::Kind::Perfect, 0.0, 0.0};
  if (model.is_vacuum()) return {Surface::Kind::Dielectric, 1.0, 0.0};
  if (zeta == 0.0) {
    const auto limit = zero_mode_limit(model);
    switch (limit.kind) {
      case ZeroModeLimit::Kind::Infinite:
        return {Surface::Kind::Perfect, 0.0, 0.0};
      case ZeroModeLimit::Kind::Finite:
        return {Surface::Kind::ZeroFinite, 0.0, limit.value};
      case ZeroModeLimit::Kind::Vanishing:
      default:
        return {Surface::Kind::ZeroVanishing, 0.0, 0.0};
    }
  }
  const double chi = chi_imag(model, zeta);
  const double q = zeta / constants::c;
  return {Surface::Kind::Dielectric, 1.0 + chi, chi * q * q};
}

/// R e^{-y} / (1 - R e^{-y}) with the denominator formed as (1 - R) - R expm1(-y).
inline double round_trip_ratio(double r, double y) {
  const double e = std::exp(-y);
  const double denom = (1.0 - r) - r * std::expm1(-y);
  return r * e / denom;
}

/// ln(1 - R e^{-y}), accurate as y -> 0 with R = 1.
inline double round_trip_log(double r, double y) {
  const double x = r * std::exp(-y);
  if (std::abs(x) < 0.5) return std::log1p(-x);
  return std::log((1.0 - r) - r * std::expm1(-y));
}

}  // namespace casimir::detail
