#pragma once

#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/numerics.hpp"

namespace casimir {

enum class Polarization { TE, TM };

/// Wall | vacuum | slab | vacuum | wall. The slab of width b sits in a cavity
/// of total width c, its centre displaced by delta from the cavity midline.
struct FiveLayerConfig {
  double cavity_c = 3e-6;      // m
  double slab_b = 500e-9;      // m
  double offset_delta = 0.0;   // m
  DielectricModel wall_model = DielectricModel::ideal();
  DielectricModel slab_model = DielectricModel::ideal();
  double temperature_T = 0.0;  // K
  QuadratureSettings quad;

  /// Total vacuum width h = c - b.
  double vacuum_h() const { return cavity_c - slab_b; }
  /// Narrower of the two vacuum gaps, h/2 - |delta|.
  double near_gap() const;
  void validate() const;
};

/// k_perp kappa0 N/D for one polarization; the pressure on the slab is
/// hbar/(2 pi^2) int dzeta int dk_perp (I_TE + I_TM) at T = 0.
double five_layer_integrand(const FiveLayerConfig& config, double zeta, double k_perp, Polarization q);

/// Net pressure on the slab, positive when it is pushed toward the nearer wall (delta > 0).
PressureResult five_layer_pressure(const FiveLayerConfig& config);

/// Ideal conductors: -(pi^2 hbar c/240) [1/(h/2 + delta)^4 - 1/(h/2 - delta)^4].
double ideal_reference(double h, double delta);

}  // namespace casimir
